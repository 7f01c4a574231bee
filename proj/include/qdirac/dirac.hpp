#pragma once

#include <string>
#include <vector>

#include "qdirac/hilbert.hpp"
#include "qdirac/jacobi.hpp"
#include "qdirac/truncation.hpp"
#include "qdirac/weights.hpp"

namespace qdirac {

struct DeltaResult {
  FourierElement value;
  double leakage = 0.0;  // Euclidean norm of the output pushed into mode n_max + 1
};

struct DomainReport {
  bool in_domain = false;
  bool traces_converged = false;
  double delta_norm_f = 0.0;
  double delta_norm_g = 0.0;
  GluingReport gluing;
  std::string reason;
};

/// Nullity of the glued homogeneous system of one Fourier mode.
struct ModeNullity {
  int n = 0;
  Index rank = 0;
  Index unknowns = 0;
  Index nullity = 0;
};

struct KernelCertificate {
  std::vector<ModeNullity> modes;
  double basis_residual = 0.0;  // interior residual of D on the formula basis

  Index total_nullity() const;
};

/// The glued Dirac type operator D(f, g) = (delta f, delta g) at truncation.
///
/// delta f = -sum_n U^(n+1) Abar^(n) f_n^+ + sum_{n>=1} A^(n-1) f_n^- (U*)^(n-1):
/// output plus mode m >= 1 receives -Abar^(m-1) f_{m-1}^+, output minus mode
/// m >= 1 receives A^(m) f_{m+1}^-, and A^(0) f_1^- lands in plus mode 0.
class GluedDirac {
 public:
  GluedDirac(WeightFamily family, TruncationSpec trunc);

  const WeightFamily& family() const { return family_; }
  const TruncationSpec& truncation() const { return trunc_; }

  /// Abar^(n) for n in [0, n_max]; n_max feeds only the leakage count.
  const ModeOperator& abar(int n) const;
  /// A^(n) for n in [0, n_max - 1].
  const ModeOperator& a(int n) const;

  DeltaResult apply_delta_with_leakage(const FourierElement& x) const;
  FourierElement apply_delta(const FourierElement& x) const;
  ComplexFourierElement apply_delta(const ComplexFourierElement& x) const;

  GluedElement apply_D(const GluedElement& x) const;
  ComplexGluedElement apply_D(const ComplexGluedElement& x) const;

  /// prod_{i>=k} c+^(0)(i), the mode-0 kernel profile with f(inf) = 1.
  const Vector& kernel_profile() const { return kernel_profile_; }

 private:
  void require_shape(const FourierElement& x) const;

  WeightFamily family_;
  TruncationSpec trunc_;
  std::vector<ModeOperator> abar_;
  std::vector<ModeOperator> a_;
  Vector kernel_profile_;
};

DomainReport in_domain(const GluedDirac& op, const GluedElement& x);

/// Basis of ker D: a single element carrying the mode-0 kernel profile on
/// both copies. The family is expected to have passed `validate`.
std::vector<GluedElement> kernel_D(const GluedDirac& op);

/// Mode-by-mode rank of the homogeneous glued systems (rows equilibrated by
/// b, Abar rows restricted to k < k_max), plus the residual of the formula
/// basis.
KernelCertificate certify_kernel(const GluedDirac& op);

}  // namespace qdirac
