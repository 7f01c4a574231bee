#include "qdirac/jacobi.hpp"

#include <vector>

namespace qdirac {

namespace {

using Triplet = Eigen::Triplet<double>;

ModeOperator make_operator(int n, OperatorKind kind, Index k_max, int dom, int cod,
                           const std::vector<Triplet>& triplets) {
  ModeOperator op;
  op.n = n;
  op.kind = kind;
  op.k_max = k_max;
  op.domain_weight = dom;
  op.codomain_weight = cod;
  op.entries.resize(k_max + 1, k_max + 1);
  op.entries.setFromTriplets(triplets.begin(), triplets.end());
  return op;
}

}  // namespace

const char* to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::kA: return "A";
    case OperatorKind::kAbar: return "Abar";
    case OperatorKind::kT1: return "T1";
    case OperatorKind::kT2: return "T2";
    case OperatorKind::kT3: return "T3";
    case OperatorKind::kDense: return "dense";
  }
  return "unknown";
}

Vector ModeOperator::apply(const Vector& f) const {
  if (f.size() != entries.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "vector length does not match operator");
  }
  return entries * f;
}

ModeOperator build_A(const WeightFamily& family, int n, Index k_max) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * k_max + 1));
  for (Index k = 0; k <= k_max; ++k) {
    const double b = family.b(n, k);
    triplets.emplace_back(k, k, b);
    if (k > 0) triplets.emplace_back(k, k - 1, -b * family.c_minus(n, k - 1));
  }
  return make_operator(n, OperatorKind::kA, k_max, n + 1, n, triplets);
}

ModeOperator build_Abar(const WeightFamily& family, int n, Index k_max) {
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(2 * k_max + 1));
  for (Index k = 0; k <= k_max; ++k) {
    const double b = family.b(n + 1, k);
    triplets.emplace_back(k, k, b);
    if (k < k_max) triplets.emplace_back(k, k + 1, -b * family.c_plus(n, k));
  }
  return make_operator(n, OperatorKind::kAbar, k_max, n, n + 1, triplets);
}

Vector kernel_Abar(const WeightFamily& family, int n, Index k_max, double alpha) {
  Vector f(k_max + 1);
  f[0] = alpha;
  for (Index k = 1; k <= k_max; ++k) f[k] = f[k - 1] / family.c_plus(n, k - 1);
  return f;
}

Vector solve_A(const WeightFamily& family, int n, const Vector& g) {
  const Index k_max = g.size() - 1;
  Vector f(g.size());
  // Forward recursion f(k) = c-(k-1) f(k-1) + g(k)/b(k) is the sum formula.
  for (Index k = 0; k <= k_max; ++k) {
    const double carried = k > 0 ? family.c_minus(n, k - 1) * f[k - 1] : 0.0;
    f[k] = carried + g[k] / family.b(n, k);
  }
  return f;
}

Vector solve_Abar(const WeightFamily& family, int n, const Vector& g, double boundary_value,
                  const TruncationSpec& trunc) {
  const Index k_max = g.size() - 1;
  Vector f(g.size());
  double h = 0.0;
  for (Index k = k_max; k >= 0; --k) {
    h = g[k] / family.b(n + 1, k) + (k < k_max ? family.c_plus(n, k) * h : 0.0);
    f[k] = -h;
  }
  if (boundary_value != 0.0) {
    f += boundary_value *
         tail_product_profile(family, ProductSign::kPlus, n, k_max, trunc);
  }
  return f;
}

}  // namespace qdirac
