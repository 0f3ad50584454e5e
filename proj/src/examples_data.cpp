#include "linfty/examples_data.hpp"

namespace linfty::examples {

LInfinityAlgebra so3() {
    LInfinityAlgebra g;
    g.space.add(0, "e1");
    g.space.add(0, "e2");
    g.space.add(0, "e3");
    g.add_bracket(2, {"e1", "e2"}, "e3", 1);
    g.add_bracket(2, {"e2", "e3"}, "e1", 1);
    g.add_bracket(2, {"e1", "e3"}, "e2", -1);
    return g;
}

namespace {

// Killing form of so3 above: <e_i, e_j> = -2 delta_ij.
Rational killing(int i, int j) { return i == j ? Rational(-2) : Rational(0); }

// <[e_a, e_b], e_c> for 1-based indices; [e_a,e_b] = eps_{abc} e_c.
Rational cartan_cocycle(int a, int b, int c) {
    auto eps = [](int i, int j, int k) -> int {
        if (i == j || j == k || i == k) return 0;
        int p = 0;
        int arr[3] = {i, j, k};
        for (int s = 0; s < 3; ++s)
            for (int t = s + 1; t < 3; ++t)
                if (arr[s] > arr[t]) ++p;
        return p % 2 == 0 ? 1 : -1;
    };
    Rational out = 0;
    for (int k = 1; k <= 3; ++k) out += Rational(eps(a, b, k)) * killing(k, c);
    return out;
}

}  // namespace

LInfinityAlgebra str_so3() {
    LInfinityAlgebra s = so3();
    s.space.add(1, "c");
    // l_3(e_a, e_b, e_c) = <[e_a,e_b], e_c> c; only (1,2,3) survives skewness
    s.add_bracket(3, {"e1", "e2", "e3"}, "c", cartan_cocycle(1, 2, 3));
    return s;
}

LInfinityMorphism str_projection() {
    LInfinityMorphism f;
    f.source = str_so3();
    f.target = so3();
    for (auto& l : {"e1", "e2", "e3"}) f.add_component(1, {l}, l, 1);
    return f;
}

LInfinityAlgebra l_hen(int p, int q) {
    // str(so3) + str(so3) with degree-1 lines c_l, c_r, modulo p c_l + q c_r.
    // Quotient coordinate: class of c_r =: "c"; then c_l = -(q/p) c.
    if (p == 0) throw std::invalid_argument("l_hen: p must be nonzero");
    LInfinityAlgebra h;
    for (auto& l : {"e1", "e2", "e3"}) h.space.add(0, std::string("l:") + l);
    for (auto& l : {"e1", "e2", "e3"}) h.space.add(0, std::string("r:") + l);
    h.space.add(1, "c");
    auto add_so3 = [&](const std::string& prefix) {
        h.add_bracket(2, {prefix + "e1", prefix + "e2"}, prefix + "e3", 1);
        h.add_bracket(2, {prefix + "e2", prefix + "e3"}, prefix + "e1", 1);
        h.add_bracket(2, {prefix + "e1", prefix + "e3"}, prefix + "e2", -1);
    };
    add_so3("l:");
    add_so3("r:");
    Rational k123 = cartan_cocycle(1, 2, 3);
    h.add_bracket(3, {"l:e1", "l:e2", "l:e3"}, "c", k123 * Rational(-q, p));
    h.add_bracket(3, {"r:e1", "r:e2", "r:e3"}, "c", k123);
    return h;
}

LInfinityMorphism l_hen_projection(int p, int q) {
    LInfinityMorphism f;
    f.source = l_hen(p, q);
    f.target = product(so3(), so3());
    for (auto& l : {"e1", "e2", "e3"}) {
        f.add_component(1, {std::string("l:") + l}, std::string("l:") + l, 1);
        f.add_component(1, {std::string("r:") + l}, std::string("r:") + l, 1);
    }
    return f;
}

LInfinityAlgebra heisenberg() {
    LInfinityAlgebra h;
    h.space.add(0, "x");
    h.space.add(0, "y");
    h.space.add(0, "z");
    h.add_bracket(2, {"x", "y"}, "z", 1);
    return h;
}

}  // namespace linfty::examples
