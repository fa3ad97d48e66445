#include "prismal/fixtures.hpp"

namespace prismal {

SimplicialMorphism figure1_morphism() {
    SimplicialComplex base({0, 1, 2}, {{0, 1}, {1, 2}});
    SimplicialComplex src({10, 11, 20, 21, 22, 30},
                          {{10, 20, 21}, {10, 11, 21}, {11, 21, 22}, {20, 21, 30}, {21, 22, 30}});
    return SimplicialMorphism(src, base, {{10, 0}, {11, 0}, {20, 1}, {21, 1}, {22, 1}, {30, 2}});
}

SimplicialMorphism figure3_morphism() {
    SimplicialComplex base({0, 1}, {{0, 1}});
    SimplicialComplex src({10, 11, 20, 21}, {{10, 11, 20, 21}});
    return SimplicialMorphism(src, base, {{10, 0}, {11, 0}, {20, 1}, {21, 1}});
}

SimplicialMorphism figure5_morphism() {
    SimplicialComplex base({0, 1, 2}, {{0, 1, 2}});
    SimplicialComplex src({10, 11, 20, 21, 30, 31}, {{10, 11, 20, 21, 30, 31}});
    return SimplicialMorphism(src, base, {{10, 0}, {11, 0}, {20, 1}, {21, 1}, {30, 2}, {31, 2}});
}

SimplicialMorphism base2d_morphism() {
    SimplicialComplex base({0, 1, 2}, {{0, 1, 2}});
    SimplicialComplex src({10, 11, 12, 20, 21, 30},
                          {{10, 11, 20, 30}, {11, 12, 20, 30}, {12, 20, 21, 30}});
    return SimplicialMorphism(src, base, {{10, 0}, {11, 0}, {12, 0}, {20, 1}, {21, 1}, {30, 2}});
}

SimplicialMorphism identity_morphism() {
    SimplicialComplex c({0, 1, 2}, {{0, 1, 2}});
    return SimplicialMorphism(c, c, {{0, 0}, {1, 1}, {2, 2}});
}

std::vector<NamedMorphism> builtin_fixtures() {
    return {{"figure1", figure1_morphism()},
            {"figure3", figure3_morphism()},
            {"figure5", figure5_morphism()},
            {"base2d", base2d_morphism()},
            {"identity", identity_morphism()}};
}

}  // namespace prismal
