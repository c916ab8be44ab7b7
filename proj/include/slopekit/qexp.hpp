#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slopekit/matrix.hpp"
#include "slopekit/qseries.hpp"

namespace slopekit::qexp {

using BigRational = boost::multiprecision::cpp_rational;

/// Primes with a level-one lift E_{p-1} of the Hasse invariant that the
/// pipelines are configured for.
inline constexpr int kSupportedPrimes[] = {5, 7, 11, 13};
bool supported_prime(int p);
void require_supported_prime(int p);

BigRational bernoulli(int k);
BigInt divisor_sigma(long long n, int power);

/// E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n for even k >= 4. Over Z the
/// normalisation must be integral; over Z/p^m its denominator must be prime to p.
QSeries eisenstein(int k, int qprec, CoefficientRing ring = CoefficientRing::integers());

/// q * prod (1 - q^n)^24.
QSeries delta(int qprec, CoefficientRing ring = CoefficientRing::integers());

/// dim M_k(SL_2(Z)).
int basis_dimension(int k);

/// E_{p-1} reduced mod p.
QSeries hasse_invariant(int p, int qprec);

struct SpaceBasis {
  int weight = 0;
  std::string level_tag = "Level1";
  CoefficientRing ring;
  int qprec = 0;
  std::vector<QSeries> forms;  // form j is q^j + O(q^dim)

  int dim() const { return static_cast<int>(forms.size()); }
};

/// Echelon basis of M_k from the monomials E_4^a E_6^b Delta^j.
SpaceBasis miller_basis(int k, int qprec, CoefficientRing ring = CoefficientRing::integers());

/// Point of weight space for p: component k mod (p-1) and w = (1+p)^k - 1.
struct WeightPoint {
  int p = 0;
  int component = 0;
  PadicScalar w;
  std::optional<int> k;
};

PadicScalar weight_coordinate(int k, const Modulus& mod);
WeightPoint weight_point(int k, const Modulus& mod);

// Hecke operators on q-expansions. Operators that read a_{np} return
// floor(Q/p) coefficients.

/// k >= 1: sum a_{np} q^n + p^{k-1} sum a_n q^{np};
/// k <= 1: p^{1-k} sum a_{np} q^n + sum a_n q^{np}.
QSeries hecke_tp(const QSeries& f, int k, int p);
/// p * sum a_{np} q^n.
QSeries up_naive(const QSeries& f, int p);
/// p^{-inf(1,k)} * up_naive: sum a_{np} q^n for k >= 1, p^{1-k} sum a_{np} q^n for k <= 1.
QSeries up(const QSeries& f, int k, int p);
/// sum a_n q^{np}; keeps the input q-precision.
QSeries frobenius_f(const QSeries& f, int k, int p);
/// q d/dq.
QSeries theta(const QSeries& f);

/// q-precision an operator reading a_{np} needs so that `out_qprec`
/// coefficients of the output are determined.
int required_qprec(int out_qprec, int p);

struct OperatorMatrix {
  PadicMatrix matrix;
  /// Whether every image lies in the span of the basis to the compared precision.
  bool closed = true;
  int compared_coefficients = 0;
};

/// Matrix (columns = images) of a q-expansion operator on an echelon basis,
/// reduced to Z/p^m. Coordinates are read from the first dim coefficients;
/// the remaining available coefficients test closure.
OperatorMatrix operator_matrix(const SpaceBasis& basis, const std::function<QSeries(const QSeries&)>& op,
                               const Modulus& mod);

}  // namespace slopekit::qexp
