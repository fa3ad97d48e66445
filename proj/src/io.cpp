#include "prismal/io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace prismal {

namespace {

/// Runs a json accessor, turning type errors into ValidationError.
template <class F>
auto guarded(const std::string& where, F&& fn) {
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw ValidationError(where + ": " + e.what());
    }
}

int parse_vertex(const json& j) {
    if (j.is_number_integer()) return j.get<int>();
    const std::string s = j.get<std::string>();
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument("bad vertex id '" + s + "'");
    return v;
}

json vertex_list(const VertexList& v) { return json(v); }

VertexList vertex_list_from(const json& j) {
    VertexList out;
    for (const auto& e : j) out.push_back(parse_vertex(e));
    return out;
}

json cell_json(const SheafCell& c) {
    json out = json::array();
    for (const auto& s : c.factors) out.push_back(vertex_list(s.vertices));
    return out;
}

SheafCell cell_from(const json& j) {
    SheafCell c;
    for (const auto& s : j) c.factors.emplace_back(vertex_list_from(s));
    return c;
}

json coord_json(const CoordSystem& cs) {
    json groups = json::array();
    for (const auto& g : cs.groups) {
        json names = json::array();
        for (Var v : g) names.push_back(v.name());
        groups.push_back(names);
    }
    return {{"groups", groups}};
}

CoordSystem coord_from(const json& j) {
    CoordSystem cs;
    for (const auto& g : j.at("groups")) {
        std::vector<Var> vars;
        for (const auto& n : g) vars.push_back(Var::parse(n.get<std::string>()));
        cs.groups.push_back(std::move(vars));
    }
    return cs;
}

json form_terms(const Form& a) {
    json terms = json::array();
    for (const auto& [key, c] : a.terms()) {
        json dvars = json::array();
        for (Var v : key) dvars.push_back(v.name());
        terms.push_back({{"dvars", dvars}, {"poly", to_json(c)}});
    }
    return terms;
}

json c_part_json(const CPart& c) {
    json out = json::array();
    for (const auto& e : c.entries) {
        json phi = json::array(), gamma = json::array();
        for (const auto& s : e.phi_parts) phi.push_back(vertex_list(s.vertices));
        for (const auto& s : e.gamma_parts) gamma.push_back(vertex_list(s.vertices));
        out.push_back({{"phi", phi},
                       {"gamma", gamma},
                       {"incidence", e.incidence},
                       {"n", e.n},
                       {"C_tilde", to_json(e.C_tilde)},
                       {"C", to_json(e.C)}});
    }
    return out;
}

}  // namespace

json to_json(const SimplicialComplex& k) {
    json maximal = json::array();
    for (const auto& m : k.maximal()) maximal.push_back(vertex_list(m));
    return {{"vertices", vertex_list(k.vertices())}, {"maximal_simplices", maximal}};
}

SimplicialComplex complex_from_json(const json& j) {
    auto [vertices, maximal] = guarded("complex", [&] {
        VertexList vs = vertex_list_from(j.at("vertices"));
        std::vector<VertexList> ms;
        for (const auto& m : j.at("maximal_simplices")) ms.push_back(vertex_list_from(m));
        return std::make_pair(vs, ms);
    });
    return SimplicialComplex(std::move(vertices), std::move(maximal));
}

json to_json(const SimplicialMorphism& f) {
    json map = json::object();
    for (const auto& [a, b] : f.vertex_map()) map[std::to_string(a)] = std::to_string(b);
    return {{"vertex_map", map}, {"target", to_json(f.target())}};
}

SimplicialMorphism morphism_from_json(const SimplicialComplex& source, const json& j) {
    auto map = guarded("morphism", [&] {
        std::map<VertexId, VertexId> m;
        for (const auto& [k, v] : j.at("vertex_map").items()) {
            VertexId a = parse_vertex(json(k));
            if (!m.emplace(a, parse_vertex(v)).second)
                throw std::invalid_argument(fmt::format("vertex {} mapped twice", a));
        }
        return m;
    });
    SimplicialComplex target;
    if (j.contains("target")) {
        target = complex_from_json(j.at("target"));
    } else {
        // Image complex: images of the maximal simplices, keeping the maximal ones.
        std::set<VertexList> images;
        for (const auto& m : source.maximal()) {
            VertexList img;
            for (VertexId v : m) {
                auto it = map.find(v);
                if (it == map.end()) throw ValidationError(fmt::format("morphism: vertex {} is not mapped", v));
                img.push_back(it->second);
            }
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            images.insert(img);
        }
        std::vector<VertexList> maximal;
        for (const auto& a : images) {
            bool covered = std::any_of(images.begin(), images.end(), [&](const VertexList& b) {
                return a != b && std::includes(b.begin(), b.end(), a.begin(), a.end());
            });
            if (!covered) maximal.push_back(a);
        }
        VertexList verts;
        for (const auto& [a, b] : map) verts.push_back(b);
        std::sort(verts.begin(), verts.end());
        verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
        target = SimplicialComplex(verts, maximal);
    }
    return SimplicialMorphism(source, target, map);
}

json to_json(const Poly& p) {
    json out = json::array();
    for (const auto& [m, c] : p.terms()) {
        json exp = json::object();
        for (const auto& [v, e] : m) exp[v.name()] = e;
        out.push_back({{"c", rational_to_string(c)}, {"exp", exp}});
    }
    return out;
}

Poly poly_from_json(const json& j) {
    return guarded("poly", [&] {
        Poly p;
        for (const auto& t : j) {
            Rational c = t.at("c").is_number_integer() ? Rational(t.at("c").get<long>())
                                                       : parse_rational(t.at("c").get<std::string>());
            Poly term(c);
            if (t.contains("exp"))
                for (const auto& [name, e] : t.at("exp").items()) {
                    int k = e.get<int>();
                    if (k < 0) throw std::invalid_argument("negative exponent for " + name);
                    term *= Poly::var(Var::parse(name), static_cast<unsigned>(k));
                }
            p += term;
        }
        return p;
    });
}

json to_json(const Form& a, const CoordSystem& context) {
    return {{"context", coord_json(context)}, {"terms", form_terms(a)}};
}

FormFile form_from_json(const json& j) {
    FormFile out;
    out.context = guarded("form context", [&] { return j.contains("context") ? coord_from(j.at("context")) : CoordSystem{}; });
    for (const auto& t : guarded("form", [&] { return j.at("terms"); })) {
        std::vector<Var> dvars = guarded("form", [&] {
            std::vector<Var> v;
            for (const auto& n : t.at("dvars")) v.push_back(Var::parse(n.get<std::string>()));
            return v;
        });
        Poly c = poly_from_json(guarded("form", [&] { return t.at("poly"); }));
        if (dvars.empty()) {
            out.form += Form::scalar(c);
            continue;
        }
        std::vector<Var> sorted = dvars;
        if (sort_sign(sorted) == 0) throw ValidationError("form: repeated differential in a term");
        out.form += Form::basis(dvars, c);
    }
    return out;
}

json to_json(const PrismalSheaf& F) {
    json stalks = json::array();
    for (const auto& [tau, cells] : F.stalks) {
        json cs = json::array();
        for (const auto& c : cells) cs.push_back(cell_json(c));
        stalks.push_back({{"tau", vertex_list(tau)}, {"cells", cs}});
    }
    json spec = json::array();
    for (const auto& [key, idx] : F.specialization)
        spec.push_back({{"from", vertex_list(key.second)}, {"to", vertex_list(key.first)}, {"map", idx}});
    json proj = json::object();
    for (const auto& [a, b] : F.projection) proj[std::to_string(a)] = b;
    return {{"kind", F.kind == SheafKind::Prismal ? "prismal" : "simplicial"},
            {"base", to_json(F.base)},
            {"projection", proj},
            {"stalks", stalks},
            {"specialization", spec}};
}

PrismalSheaf sheaf_from_json(const json& j) {
    PrismalSheaf F;
    const std::string kind = guarded("sheaf", [&] { return j.at("kind").get<std::string>(); });
    if (kind != "prismal" && kind != "simplicial") throw ValidationError("sheaf: unknown kind '" + kind + "'");
    F.kind = kind == "prismal" ? SheafKind::Prismal : SheafKind::Simplicial;
    F.base = complex_from_json(guarded("sheaf", [&] { return j.at("base"); }));
    guarded("sheaf", [&] {
        if (j.contains("projection"))
            for (const auto& [k, v] : j.at("projection").items()) F.projection[parse_vertex(json(k))] = parse_vertex(v);
        for (const auto& s : j.at("stalks")) {
            VertexList tau = vertex_list_from(s.at("tau"));
            if (!F.base.contains(tau)) throw ValidationError("sheaf: stalk over " + Simplex(tau).to_string() + " not in base");
            auto& cells = F.stalks[tau];
            for (const auto& c : s.at("cells")) cells.push_back(cell_from(c));
        }
        for (const auto& s : j.at("specialization")) {
            VertexList from = vertex_list_from(s.at("from")), to = vertex_list_from(s.at("to"));
            auto idx = s.at("map").get<std::vector<int>>();
            auto it = F.stalks.find(from);
            if (it == F.stalks.end() || idx.size() != it->second.size())
                throw ValidationError("sheaf: specialization from " + Simplex(from).to_string() + " has the wrong size");
            F.specialization[{to, from}] = std::move(idx);
        }
        return 0;
    });
    return F;
}

json to_json(const IdentityReport& r) {
    json out = {{"identity", r.identity}, {"case", r.case_desc}, {"pass", r.pass}};
    if (!r.pass) out["residual"] = r.residual;
    return out;
}

json to_json(const std::vector<IdentityReport>& reports) {
    json out = json::array();
    for (const auto& r : reports) out.push_back(to_json(r));
    return out;
}

json to_json(const PrimitiveResult& res) {
    json prisms = json::array();
    for (const auto& pp : res.prisms) {
        const PrismData& P = pp.prism;
        json fibers = json::array();
        for (const auto& s : P.fibers) fibers.push_back(vertex_list(s.vertices));
        json entry = {{"sigma", vertex_list(P.sigma.vertices)},
                      {"tau", vertex_list(P.tau.vertices)},
                      {"fibers", fibers},
                      {"C", c_part_json(pp.C)},
                      {"D", pp.D ? c_part_json(*pp.D) : json(nullptr)},
                      {"H", to_json(pp.H, P.context)},
                      {"fiber_constant", to_json(pp.fiber_constant)},
                      {"theodg_residual", form_terms(pp.theodg_residual)},
                      {"literal_residual_zero", pp.literal_residual.is_zero()},
                      {"corrected", !pp.correction.is_zero()}};
        prisms.push_back(entry);
    }
    json hs = json::array();
    for (const auto& [sigma, form] : res.H_S)
        hs.push_back({{"sigma", vertex_list(sigma)}, {"terms", form_terms(form)}});
    json horizontal = json::array();
    for (const auto& h : res.horizontal) {
        json e = {{"tau", vertex_list(h.tau)},
                  {"tau_prime", vertex_list(h.tau_prime)},
                  {"sigma", vertex_list(h.sigma)},
                  {"vanishing_case", h.vanishing_case},
                  {"ok", h.ok}};
        if (!h.ok) e["witness"] = h.witness;
        horizontal.push_back(e);
    }
    json gluing = json::array();
    for (const auto& g : res.gluing)
        gluing.push_back({{"tau", vertex_list(g.tau)},
                          {"sigma1", vertex_list(g.sigma1)},
                          {"sigma2", vertex_list(g.sigma2)},
                          {"ok", g.ok}});
    std::size_t glue_bad = std::count_if(res.gluing.begin(), res.gluing.end(), [](const auto& g) { return !g.ok; });
    return {{"r", res.r},
            {"prisms", prisms},
            {"H_S", hs},
            {"report",
             {{"residuals_zero", res.residuals_zero()},
              {"horizontal_ok", res.horizontal_ok()},
              {"gluing_ok", glue_bad == 0},
              {"corrected_prisms", res.corrected_prisms()},
              {"descent_failures", res.descent_failures},
              {"horizontal", horizontal},
              {"gluing", gluing}}}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace prismal
