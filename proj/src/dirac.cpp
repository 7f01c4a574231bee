#include "qdirac/dirac.hpp"

#include <cmath>
#include <utility>

#include <Eigen/OrderingMethods>
#include <Eigen/SparseCore>
#include <Eigen/SparseQR>

#include "qdirac/errors.hpp"

namespace qdirac {

Index KernelCertificate::total_nullity() const {
  Index total = 0;
  for (const auto& m : modes) total += m.nullity;
  return total;
}

GluedDirac::GluedDirac(WeightFamily family, TruncationSpec trunc)
    : family_(std::move(family)), trunc_(trunc) {
  trunc_.check();
  abar_.reserve(trunc_.n_max + 1);
  for (int n = 0; n <= trunc_.n_max; ++n) abar_.push_back(build_Abar(family_, n, trunc_.k_max));
  a_.reserve(trunc_.n_max);
  for (int n = 0; n < trunc_.n_max; ++n) a_.push_back(build_A(family_, n, trunc_.k_max));
  kernel_profile_ = tail_product_profile(family_, ProductSign::kPlus, 0, trunc_.k_max, trunc_);
}

const ModeOperator& GluedDirac::abar(int n) const {
  if (n < 0 || n > trunc_.n_max) throw Error(ErrorCode::kIndexMismatch, "Abar mode out of range");
  return abar_[n];
}

const ModeOperator& GluedDirac::a(int n) const {
  if (n < 0 || n >= trunc_.n_max) throw Error(ErrorCode::kIndexMismatch, "A mode out of range");
  return a_[n];
}

void GluedDirac::require_shape(const FourierElement& x) const {
  if (x.n_max() != trunc_.n_max || x.k_max() != trunc_.k_max) {
    throw Error(ErrorCode::kShapeMismatch, "element shape does not match the truncation");
  }
}

DeltaResult GluedDirac::apply_delta_with_leakage(const FourierElement& x) const {
  require_shape(x);
  const int n_max = trunc_.n_max;
  DeltaResult out{FourierElement(n_max, trunc_.k_max), 0.0};
  for (int m = 1; m <= n_max; ++m) out.value.plus(m) = -abar_[m - 1].apply(x.plus(m - 1));
  out.value.plus(0) = a_[0].apply(x.minus(1));
  for (int m = 1; m < n_max; ++m) out.value.minus(m) = a_[m].apply(x.minus(m + 1));
  out.leakage = abar_[n_max].apply(x.plus(n_max)).norm();
  return out;
}

FourierElement GluedDirac::apply_delta(const FourierElement& x) const {
  return apply_delta_with_leakage(x).value;
}

ComplexFourierElement GluedDirac::apply_delta(const ComplexFourierElement& x) const {
  FourierElement re(x.n_max(), x.k_max());
  FourierElement im(x.n_max(), x.k_max());
  for (int n = 0; n <= x.n_max(); ++n) {
    re.plus(n) = x.plus(n).real();
    im.plus(n) = x.plus(n).imag();
    if (n >= 1) {
      re.minus(n) = x.minus(n).real();
      im.minus(n) = x.minus(n).imag();
    }
  }
  const FourierElement dre = apply_delta(re);
  const FourierElement dim = apply_delta(im);
  ComplexFourierElement out(x.n_max(), x.k_max());
  const std::complex<double> i(0.0, 1.0);
  for (int n = 0; n <= x.n_max(); ++n) {
    out.plus(n) = dre.plus(n).cast<std::complex<double>>() + i * dim.plus(n);
    if (n >= 1) out.minus(n) = dre.minus(n).cast<std::complex<double>>() + i * dim.minus(n);
  }
  return out;
}

GluedElement GluedDirac::apply_D(const GluedElement& x) const {
  return GluedElement(apply_delta(x.f), apply_delta(x.g));
}

ComplexGluedElement GluedDirac::apply_D(const ComplexGluedElement& x) const {
  return ComplexGluedElement(apply_delta(x.f), apply_delta(x.g));
}

DomainReport in_domain(const GluedDirac& op, const GluedElement& x) {
  DomainReport r;
  const GluedElement dx = op.apply_D(x);
  r.delta_norm_f = norm(dx.f, op.family());
  r.delta_norm_g = norm(dx.g, op.family());
  if (!std::isfinite(r.delta_norm_f) || !std::isfinite(r.delta_norm_g)) {
    r.reason = "delta x is not square summable at this truncation";
    return r;
  }
  try {
    r.gluing = check_gluing(x, op.truncation());
    r.traces_converged = true;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kTraceNotConverged) throw;
    r.reason = e.what();
    return r;
  }
  r.in_domain = r.gluing.glued;
  if (!r.in_domain) r.reason = "gluing fails: " + r.gluing.offending_condition;
  return r;
}

std::vector<GluedElement> kernel_D(const GluedDirac& op) {
  const auto& trunc = op.truncation();
  GluedElement x(trunc.n_max, trunc.k_max);
  x.f.plus(0) = op.kernel_profile();
  x.g.plus(0) = op.kernel_profile();
  return {x};
}

namespace {

using Triplet = Eigen::Triplet<double>;

// Appends the rows of op divided by their diagonal entry, restricted to
// rows < row_limit, with columns offset by col.
void append_equilibrated(const ModeOperator& op, Index row_limit, Index& row, Index col,
                         std::vector<Triplet>& out) {
  for (Index k = 0; k < row_limit; ++k) {
    const double diag = op.entries.coeff(k, k);
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(op.entries, k); it; ++it) {
      out.emplace_back(row, col + it.col(), it.value() / diag);
    }
    ++row;
  }
}

ModeNullity mode_nullity(int n, Index rows, Index cols, const std::vector<Triplet>& triplets) {
  Eigen::SparseMatrix<double> m(rows, cols);
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  Eigen::SparseQR<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> qr;
  qr.setPivotThreshold(1e-10);
  qr.compute(m);
  ModeNullity out;
  out.n = n;
  out.unknowns = cols;
  out.rank = qr.rank();
  out.nullity = cols - out.rank;
  return out;
}

}  // namespace

KernelCertificate certify_kernel(const GluedDirac& op) {
  const auto& trunc = op.truncation();
  const Index len = trunc.k_max + 1;
  const Index k_max = trunc.k_max;
  KernelCertificate cert;

  {
    // Mode 0: [f_0^+, g_0^+] with f_0^+(K) = g_0^+(K).
    std::vector<Triplet> t;
    Index row = 0;
    append_equilibrated(op.abar(0), k_max, row, 0, t);
    append_equilibrated(op.abar(0), k_max, row, len, t);
    t.emplace_back(row, k_max, 1.0);
    t.emplace_back(row, len + k_max, -1.0);
    ++row;
    cert.modes.push_back(mode_nullity(0, row, 2 * len, t));
  }
  for (int n = 1; n <= trunc.n_max; ++n) {
    // [f_n^+, g_n^+, f_n^-, g_n^-] with the mirror gluing at k = K.
    std::vector<Triplet> t;
    Index row = 0;
    const ModeOperator& abar = op.abar(n);
    const ModeOperator& a = op.a(n - 1);
    append_equilibrated(abar, k_max, row, 0, t);
    append_equilibrated(abar, k_max, row, len, t);
    append_equilibrated(a, len, row, 2 * len, t);
    append_equilibrated(a, len, row, 3 * len, t);
    t.emplace_back(row, k_max, 1.0);
    t.emplace_back(row, 3 * len + k_max, -1.0);
    ++row;
    t.emplace_back(row, 2 * len + k_max, 1.0);
    t.emplace_back(row, len + k_max, -1.0);
    ++row;
    cert.modes.push_back(mode_nullity(n, row, 4 * len, t));
  }

  const GluedElement basis = kernel_D(op).front();
  const GluedElement d = op.apply_D(basis);
  double worst = 0.0;
  for (int n = 0; n <= trunc.n_max; ++n) {
    for (const auto* v : {&d.f.plus(n), &d.g.plus(n)}) {
      worst = std::max(worst, v->head(k_max).cwiseAbs().maxCoeff());
    }
  }
  cert.basis_residual = worst;
  return cert;
}

}  // namespace qdirac
