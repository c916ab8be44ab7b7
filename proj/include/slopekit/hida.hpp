#pragma once

#include <map>
#include <string>
#include <vector>

#include "slopekit/qexp.hpp"
#include "slopekit/spectral.hpp"

namespace slopekit::hida {

/// Miller basis of M_k reduced mod p.
qexp::SpaceBasis mod_p_space(int k, int p, int qprec);

/// Rank of e(U_p) on M_k mod p; U_p = T_p mod p for k >= 2.
int ordinary_rank_mod_p(int k, int p);

struct ControlReport {
  int p = 0;
  int k = 0;
  int n = 0;
  int source_weight = 0;  // classical side
  int target_weight = 0;  // k + n(p-1)
  int source_rank = 0;    // rank e(U_p) on M_source mod p
  int target_rank = 0;    // rank e(U_p) on M_target mod p
  bool contained = false; // e M_target mod p inside M_source mod p
  bool weight_two = false;
  bool passed() const { return contained && source_rank == target_rank; }
};

/// e(U_p) M_{k+n(p-1)}(F_p) against M_k(F_p) inside F_p[[q]]; k >= 3.
ControlReport control_check_h0(int k, int p, int n);
/// Weight-two form: the classical side is M_{2+(p-1)}, one Hasse twist up; n >= 1.
ControlReport control_check_h0_weight2(int p, int n);

/// Polynomial in w = (1+p)^k - 1 on the component k = i mod (p-1).
struct IwasawaTruncation {
  int p = 0;
  int component = 0;
  std::vector<PadicScalar> coeffs;  // lowest degree first, each with its own precision
  int precision() const;
};

PadicScalar iwasawa_specialize(const IwasawaTruncation& f, int k);
PadicScalar iwasawa_evaluate(const IwasawaTruncation& f, const PadicScalar& w);

/// Divided-difference form of the interpolating polynomial. Kept alongside the
/// monomial form because evaluation near the nodes recovers the digits that
/// the divided differences lose.
struct NewtonInterpolant {
  int p = 0;
  int component = 0;
  std::vector<int> weights;
  std::vector<PadicScalar> differences;  // f[w_0..w_j], each with its own precision
};

NewtonInterpolant newton_interpolate(int p, int component, const std::vector<int>& weights,
                                     const std::vector<PadicScalar>& values);
IwasawaTruncation to_monomial(const NewtonInterpolant& f);
/// Value of the polynomial at w_k, to at most `cap` digits.
PadicScalar newton_specialize(const NewtonInterpolant& f, int k, int cap);

/// Interpolating polynomial through (w_{k_j}, values_j) by divided differences.
/// Non-integral divided differences mean the data are not Lambda-adic.
IwasawaTruncation iwasawa_interpolate(int p, int component, const std::vector<int>& weights,
                                      const std::vector<PadicScalar>& values);

/// U_p eigenvalue of the p-stabilisation: the unit root of x^2 - a_p x + p^{k-1}.
PadicScalar unit_root(const PadicScalar& ap, int k);

struct EigenSystem {
  std::string key;                   // eigenvalues mod p
  int rank = 0;                      // > 1 means congruent systems were not separated
  std::map<int, PadicScalar> values; // ell -> a_ell; key p holds the U_p eigenvalue
};

struct WeightEigenData {
  int k = 0;
  int rank = 0;
  PadicMatrix projector;
  std::vector<EigenSystem> systems;
  std::vector<std::string> ambiguities;
};

/// e(T_p) on M_k over Z/p^m, split by generalised eigenspaces mod p of T_p and T_ell.
WeightEigenData ordinary_eigen_data(int k, int p, const std::vector<int>& hecke_primes, int m);

struct CongruenceCheck {
  std::string system;
  int ell = 0;
  int k1 = 0;
  int k2 = 0;
  int digits = 0;  // min(m, v_p(w_{k1} - w_{k2}))
  bool holds = false;
};

struct FamilySystem {
  std::string key;
  std::map<int, std::vector<PadicScalar>> values;  // ell -> per sample weight
  std::map<int, IwasawaTruncation> fitted;
};

struct OrdinaryFamily {
  int p = 0;
  int component = 0;
  int m = 0;
  std::vector<int> weights;
  std::vector<int> hecke_primes;
  int rank = 0;
  std::vector<FamilySystem> systems;
  std::vector<CongruenceCheck> congruence_checks;
  std::vector<std::string> ambiguities;
  bool round_trip = true;

  bool passed() const;
};

OrdinaryFamily fit_family(int p, int component, const std::vector<int>& weights, const std::vector<int>& hecke_primes,
                          int m);

}  // namespace slopekit::hida
