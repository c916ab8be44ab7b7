#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slopekit/coleman.hpp"
#include "slopekit/matrix.hpp"
#include "slopekit/spectral.hpp"

namespace slopekit::duality {

/// The degree-one side as the dual module: F = gram^{-1} U^T gram, so that
/// <U f, g> = <f, F g> for <x, y> = x^T gram y.
struct DualFamily {
  PadicMatrix source_operator;
  PadicMatrix gram;
  PadicMatrix operator_on_dual;
  std::size_t source_rank = 0;  // rank e(U)
  std::size_t dual_rank = 0;    // rank e(F)
};

/// Identity gram.
DualFamily dual_module(const PadicMatrix& up);
/// Gram must be square of the operator's size with unit determinant.
DualFamily dual_module(const PadicMatrix& up, const PadicMatrix& gram);

/// (U f)^T gram g == f^T gram (F g), exactly. f and g are column vectors.
bool adjunction_check(const PadicMatrix& f, const PadicMatrix& g, const PadicMatrix& up, const PadicMatrix& gram,
                      const PadicMatrix& f_dual);

/// Random matrix with unit determinant mod p, from a seeded generator.
PadicMatrix random_unimodular(const Modulus& mod, std::size_t n, std::uint64_t seed);

struct ThetaProbe {
  int shift = 0;
  std::vector<Rational> probed;   // weight 2-k slopes that could be tested
  std::vector<Rational> found;    // probed slopes whose shift is a weight-k slope
  std::vector<Rational> missing;  // shifted slope certified absent from weight k
  int theta_kernel = 0;           // classes removed because theta^{k-1} kills them
  bool holds() const { return !probed.empty() && missing.empty(); }
};

/// Multiset inclusion of shifted weight 2-k slopes into the weight-k slopes,
/// tested only where both polygons are certified. The shift acts on the slope
/// of the classical operator sum a_{np} q^n, not on the normalised one.
ThetaProbe theta_probe(const coleman::SlopeReport& dual_weight, const coleman::SlopeReport& weight, int shift);

struct DualityReport {
  int k = 0;
  int p = 0;
  int depth = 0;
  int m = 0;
  bool structural = false;      // char series of U, U^T and F agree exactly, both weights
  bool rank_duality = false;    // rank e(U) = rank e(F), both weights
  std::size_t ordinary_rank = 0;
  std::size_t dual_ordinary_rank = 0;
  ThetaProbe theta;             // shift k - 1
  ThetaProbe negative_control;  // shift k; expected to fail
  coleman::SlopeReport weight_k;
  coleman::SlopeReport weight_dual;  // weight 2 - k

  /// Indeterminate when no slope could be probed.
  enum class Verdict { Pass, Fail, Indeterminate };
  Verdict verdict() const;
};

std::string to_string(DualityReport::Verdict v);

DualityReport charseries_duality_check(int k, int p, int depth, int m, std::uint64_t seed = 1);

}  // namespace slopekit::duality
