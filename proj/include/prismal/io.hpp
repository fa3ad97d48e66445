#pragma once

#include "prismal/forms.hpp"
#include "prismal/mesh.hpp"
#include "prismal/primitive.hpp"
#include "prismal/sheaf.hpp"
#include "prismal/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace prismal {

using json = nlohmann::json;

// All readers throw ValidationError with the offending entry on malformed
// input; structural invariants are enforced by the constructors they call.

json to_json(const SimplicialComplex& k);
SimplicialComplex complex_from_json(const json& j);

/// {"vertex_map": {"<src>": "<dst>"}, "target": complex}. Without "target"
/// the target is the image of the source.
json to_json(const SimplicialMorphism& f);
SimplicialMorphism morphism_from_json(const SimplicialComplex& source, const json& j);

json to_json(const Poly& p);
Poly poly_from_json(const json& j);

struct FormFile {
    CoordSystem context;
    Form form;
};
json to_json(const Form& a, const CoordSystem& context);
FormFile form_from_json(const json& j);

json to_json(const PrismalSheaf& F);
PrismalSheaf sheaf_from_json(const json& j);

json to_json(const IdentityReport& r);
json to_json(const std::vector<IdentityReport>& reports);

json to_json(const PrimitiveResult& res);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

}  // namespace prismal
