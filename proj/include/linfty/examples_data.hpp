#pragma once

#include "linfty/linf_ops.hpp"

namespace linfty::examples {

/// so(3) with epsilon-tensor structure constants: [e1,e2]=e3 cyclically.
LInfinityAlgebra so3();

/// The minimal string Lie 2-algebra of so(3): degree 0 = so(3), degree 1 = R,
/// l_3 = Killing form of the bracket, entered with rational structure
/// constants (<x,y> = trace(ad x ad y) = -2 delta).
LInfinityAlgebra str_so3();

/// Projection str(so(3)) -> so(3) (strict, drops the degree-1 line).
LInfinityMorphism str_projection();

/// Quotient Lie 2-algebra of str(so(3)) + str(so(3)) by the line
/// r |-> (p c_l, q c_r) in degree 1, with rational slope data (p,q) = (1,2).
/// The paper's obstruction phenomenon needs Q-linearly-independent (p,q),
/// which cannot hold over exact rationals; only the algebra, homology, and
/// k-invariants are exercised here.
LInfinityAlgebra l_hen(int p = 1, int q = 2);

/// Strict quotient l_hen -> so(3) x so(3).
LInfinityMorphism l_hen_projection(int p = 1, int q = 2);

/// Heisenberg Lie algebra h3: basis x, y, z with [x,y] = z, z central.
LInfinityAlgebra heisenberg();

}  // namespace linfty::examples
