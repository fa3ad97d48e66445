#pragma once

#include "prismal/mesh.hpp"

#include <string>
#include <vector>

namespace prismal {

struct NamedMorphism {
    std::string name;
    SimplicialMorphism f;
};

/// Five triangles over two edges; σ_1 = (10,20,21) is not equidimensional
/// over y_0.
SimplicialMorphism figure1_morphism();
/// One 3-simplex over an edge, two fiber edges.
SimplicialMorphism figure3_morphism();
/// One 5-simplex over a triangle, a fiber edge over each vertex.
SimplicialMorphism figure5_morphism();
/// Three tetrahedra over a triangle whose generic fiber is a path of three edges.
SimplicialMorphism base2d_morphism();
SimplicialMorphism identity_morphism();

std::vector<NamedMorphism> builtin_fixtures();

}  // namespace prismal
