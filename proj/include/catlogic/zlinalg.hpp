#ifndef CATLOGIC_ZLINALG_HPP
#define CATLOGIC_ZLINALG_HPP

#include <optional>
#include <vector>

namespace catlogic {

/// Integer matrices, row-major.  Small and dense; everything here is exact
/// arithmetic over Z, used to present finite abelian groups as Z^k modulo a
/// relation lattice.
using ZVec = std::vector<long long>;
using ZMat = std::vector<ZVec>;

ZMat zmat_identity(int n);
ZMat zmat_mul(const ZMat& a, const ZMat& b);
ZVec zmat_apply(const ZMat& a, const ZVec& x);

/// U*A*V = D with U, V unimodular and D diagonal (d[i][i] >= 0, zero past
/// the rank).  vinv tracks V^{-1}.  No divisibility chain is enforced; any
/// diagonal form suffices for quotient decompositions and solving.
struct Smith {
  ZMat d, u, v, vinv;
  int rank = 0;
};
Smith smith_normal_form(ZMat a);

/// Generators (as rows) of the lattice {x : A x = 0}.
ZMat kernel_lattice(const ZMat& a);

/// One solution of A x = b over Z, if any.
std::optional<ZVec> solve_integer(const ZMat& a, const ZVec& b);

/// Z^k modulo the row span of rels: in coordinates x' = vinv * x the group
/// is the direct sum of Z/orders[i] (order 0 means a free factor, order 1 a
/// trivial one); x = v * x' converts back.
struct QuotientStructure {
  ZVec orders;
  ZMat v, vinv;
};
QuotientStructure quotient_structure(int k, const ZMat& rels);

} // namespace catlogic

#endif
