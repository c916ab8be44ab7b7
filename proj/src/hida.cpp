#include "slopekit/hida.hpp"

#include <algorithm>
#include <set>

#include "slopekit/error.hpp"

namespace slopekit::hida {

namespace {

constexpr int kClosureMargin = 8;

// v_p((1+p)^a - (1+p)^b) = 1 + v_p(a - b) for odd p.
int weight_gap_valuation(int p, int a, int b) {
  int d = std::abs(a - b), v = 1;
  while (d != 0 && d % p == 0) d /= p, ++v;
  return v;
}

// Largest m with p^m inside the residue range.
int max_precision(int p) {
  int m = 0;
  unsigned __int128 pm = 1;
  while (pm < (static_cast<unsigned __int128>(1) << 126) / static_cast<unsigned>(p)) pm *= p, ++m;
  return m;
}

PadicMatrix stack(const std::vector<QSeries>& forms, const Modulus& mod, int qprec) {
  PadicMatrix a(mod, forms.size(), static_cast<std::size_t>(qprec));
  for (std::size_t i = 0; i < forms.size(); ++i)
    for (int j = 0; j < qprec; ++j) a(i, static_cast<std::size_t>(j)) = mod.reduce(forms[i][j]);
  return a;
}

qexp::OperatorMatrix up_mod_p(const qexp::SpaceBasis& basis, int k, int p) {
  auto m = qexp::operator_matrix(basis, [&](const QSeries& f) { return qexp::up(f, k, p); }, Modulus(p, 1));
  if (!m.closed) throw InternalError("U_p mod p does not preserve M_" + std::to_string(k) + " mod p");
  return m;
}

void require_prime_and_weight(int k, int p) {
  qexp::require_supported_prime(p);
  if (k % 2 != 0 || k < 0) throw InvalidArgument("weight must be even and nonnegative, got " + std::to_string(k));
}

}  // namespace

qexp::SpaceBasis mod_p_space(int k, int p, int qprec) {
  require_prime_and_weight(k, p);
  auto b = qexp::miller_basis(k, qprec, CoefficientRing::mod_pm(p, 1));
  for (int j = 0; j < b.dim(); ++j)
    if (b.forms[j][j] != 1) throw InternalError("Miller basis lost its leading coefficient mod p");
  return b;
}

int ordinary_rank_mod_p(int k, int p) {
  require_prime_and_weight(k, p);
  if (k < 2) throw InvalidArgument("ordinary_rank_mod_p: needs k >= 2");
  const int d = qexp::basis_dimension(k);
  if (d == 0) return 0;
  const auto basis = mod_p_space(k, p, qexp::required_qprec(d + kClosureMargin, p));
  return static_cast<int>(ordinary_projector(up_mod_p(basis, k, p).matrix).rank);
}

namespace {

ControlReport control(int p, int source, int target, int n, bool weight_two) {
  ControlReport r;
  r.p = p;
  r.k = weight_two ? 2 : source;
  r.n = n;
  r.weight_two = weight_two;
  r.source_weight = source;
  r.target_weight = target;
  const int dt = qexp::basis_dimension(target);
  const int q = qexp::required_qprec(dt + kClosureMargin, p);
  const Modulus mod(p, 1);

  const auto src = mod_p_space(source, p, q);
  const auto tgt = mod_p_space(target, p, q);
  r.source_rank = source >= 2 ? ordinary_rank_mod_p(source, p) : 0;
  if (dt == 0) {
    r.contained = true;
    return r;
  }
  const auto proj = ordinary_projector(up_mod_p(tgt, target, p).matrix);
  r.target_rank = static_cast<int>(proj.rank);
  std::vector<QSeries> ordinary;
  for (int c = 0; c < dt; ++c) {
    QSeries v = QSeries::zero(CoefficientRing::mod_pm(p, 1), q);
    for (int j = 0; j < dt; ++j) {
      const Residue coef = proj.idempotent(static_cast<std::size_t>(j), static_cast<std::size_t>(c));
      if (coef != 0) v = v + tgt.forms[j].scaled(to_bigint(coef));
    }
    ordinary.push_back(v);
  }
  // The Hasse tower inclusion is the identity on q-expansions mod p.
  std::vector<QSeries> both = src.forms;
  both.insert(both.end(), ordinary.begin(), ordinary.end());
  r.contained = rank_mod_p(stack(both, mod, q)) == static_cast<std::size_t>(src.dim());
  return r;
}

}  // namespace

ControlReport control_check_h0(int k, int p, int n) {
  require_prime_and_weight(k, p);
  if (k < 3) throw InvalidArgument("control_check_h0: needs k >= 3; use the weight-two variant for k = 2");
  if (n < 0) throw InvalidArgument("control_check_h0: n must be nonnegative");
  return control(p, k, k + n * (p - 1), n, false);
}

ControlReport control_check_h0_weight2(int p, int n) {
  qexp::require_supported_prime(p);
  if (n < 1) throw InvalidArgument("control_check_h0_weight2: n must be >= 1");
  return control(p, 2 + (p - 1), 2 + n * (p - 1), n, true);
}

// ---------------------------------------------------------------------------

int IwasawaTruncation::precision() const {
  int prec = coeffs.empty() ? 0 : coeffs.front().precision();
  for (const auto& c : coeffs) prec = std::min(prec, c.precision());
  return prec;
}

PadicScalar iwasawa_evaluate(const IwasawaTruncation& f, const PadicScalar& w) {
  if (f.coeffs.empty()) throw InvalidArgument("empty Iwasawa polynomial");
  PadicScalar acc = f.coeffs.back();
  for (std::size_t i = f.coeffs.size() - 1; i-- > 0;) acc = acc * w + f.coeffs[i];
  return acc;
}

PadicScalar iwasawa_specialize(const IwasawaTruncation& f, int k) {
  const int c = ((k % (f.p - 1)) + (f.p - 1)) % (f.p - 1);
  if (c != f.component)
    throw InvalidArgument("weight " + std::to_string(k) + " lies on component " + std::to_string(c) + ", not " +
                          std::to_string(f.component));
  const Modulus mod(f.p, std::max(1, f.precision()));
  return iwasawa_evaluate(f, qexp::weight_coordinate(k, mod).reduced(f.precision()));
}

namespace {

int node_modulus_digits(int p, const std::vector<int>& weights, int m) {
  // Gaps w_i - w_j have valuation 1 + v_p(k_i - k_j), which may reach or exceed m.
  int gap_digits = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (std::size_t j = i + 1; j < weights.size(); ++j)
      gap_digits = std::max(gap_digits, weight_gap_valuation(p, weights[i], weights[j]));
  return std::min(m + gap_digits + 1, max_precision(p));
}

}  // namespace

NewtonInterpolant newton_interpolate(int p, int component, const std::vector<int>& weights,
                                     const std::vector<PadicScalar>& values) {
  if (weights.empty() || weights.size() != values.size())
    throw InvalidArgument("iwasawa_interpolate: need matching, nonempty weight and value lists");
  if (std::set<int>(weights.begin(), weights.end()).size() != weights.size())
    throw InvalidArgument("iwasawa_interpolate: repeated sample weight");
  int m = 0;
  for (const auto& v : values) m = std::max(m, v.precision());
  const Modulus mod(p, node_modulus_digits(p, weights, m));
  std::vector<PadicScalar> w;
  for (int k : weights) {
    if (((k % (p - 1)) + (p - 1)) % (p - 1) != component)
      throw InvalidArgument("weight " + std::to_string(k) + " is off component " + std::to_string(component));
    w.push_back(qexp::weight_coordinate(k, mod));
  }
  const std::size_t n = weights.size();
  std::vector<PadicScalar> dd = values;
  for (std::size_t level = 1; level < n; ++level)
    for (std::size_t j = n - 1; j >= level; --j) {
      const int v = weight_gap_valuation(p, weights[j], weights[j - level]);
      const PadicScalar num = dd[j] - dd[j - 1];
      if (v >= num.precision() && num.is_zero()) {
        // Known to vanish, but every digit of the quotient is lost.
        dd[j] = PadicScalar::from_int(Modulus(p, 0), 0);
        continue;
      }
      try {
        dd[j] = num.divide(w[j] - w[j - level]);
      } catch (const PrecisionError&) {
        throw VerificationError("divided difference of order " + std::to_string(level) + " at weights " +
                                std::to_string(weights[j - level]) + ".." + std::to_string(weights[j]) +
                                " is not integral: the values do not interpolate over Lambda");
      }
    }
  return NewtonInterpolant{p, component, weights, std::move(dd)};
}

IwasawaTruncation to_monomial(const NewtonInterpolant& f) {
  const std::size_t n = f.weights.size();
  int m = 0;
  for (const auto& d : f.differences) m = std::max(m, d.precision());
  const Modulus mod(f.p, node_modulus_digits(f.p, f.weights, m));
  IwasawaTruncation out{f.p, f.component, {f.differences[n - 1]}};
  for (std::size_t i = n - 1; i-- > 0;) {
    const PadicScalar wi = qexp::weight_coordinate(f.weights[i], mod);
    std::vector<PadicScalar> next(out.coeffs.size() + 1, PadicScalar::from_int(mod, 0));
    for (std::size_t d = 0; d < out.coeffs.size(); ++d) {
      next[d + 1] = next[d + 1] + out.coeffs[d];
      next[d] = next[d] - out.coeffs[d] * wi;
    }
    next[0] = next[0] + f.differences[i];
    out.coeffs = std::move(next);
  }
  return out;
}

PadicScalar newton_specialize(const NewtonInterpolant& f, int k, int cap) {
  const int c = ((k % (f.p - 1)) + (f.p - 1)) % (f.p - 1);
  if (c != f.component)
    throw InvalidArgument("weight " + std::to_string(k) + " lies on component " + std::to_string(c) + ", not " +
                          std::to_string(f.component));
  if (cap < 0) throw InvalidArgument("newton_specialize: negative precision cap");
  const Modulus top(f.p, std::max(cap, 1));
  const PadicScalar w = qexp::weight_coordinate(k, top);
  // term_j = f[w_0..w_j] * prod_{i<j} (w - w_i); a factor of valuation v
  // lifts the known digits of the difference by v.
  Residue acc = 0;
  int digits = cap;
  Residue prod = 1;
  int prod_val = 0;
  for (std::size_t j = 0; j < f.weights.size(); ++j) {
    if (j > 0) {
      if (f.weights[j - 1] == k) break;  // every later term vanishes exactly
      prod = top.mul(prod, (w - qexp::weight_coordinate(f.weights[j - 1], top)).residue());
      prod_val += weight_gap_valuation(f.p, k, f.weights[j - 1]);
    }
    const PadicScalar& d = f.differences[j];
    digits = std::min(digits, d.precision() + prod_val);
    acc = top.add(acc, top.mul(d.residue() % top.value(), prod));
  }
  return PadicScalar(Modulus(f.p, digits), acc % Modulus(f.p, digits).value());
}

IwasawaTruncation iwasawa_interpolate(int p, int component, const std::vector<int>& weights,
                                      const std::vector<PadicScalar>& values) {
  return to_monomial(newton_interpolate(p, component, weights, values));
}

PadicScalar unit_root(const PadicScalar& ap, int k) {
  if (!ap.is_unit()) throw InvalidArgument("unit_root: a_p is not a unit");
  const Modulus& mod = ap.modulus();
  const PadicScalar pk(mod, mod.p_power(k - 1));
  PadicScalar alpha = ap;
  for (int it = 0; it <= mod.m(); ++it) alpha = ap - pk * alpha.inverse();
  return alpha;
}

// ---------------------------------------------------------------------------

WeightEigenData ordinary_eigen_data(int k, int p, const std::vector<int>& hecke_primes, int m) {
  require_prime_and_weight(k, p);
  if (k < 3) throw InvalidArgument("ordinary_eigen_data: needs k >= 3");
  for (int l : hecke_primes)
    if (!is_prime(l) || l == p) throw InvalidArgument("Hecke prime list must hold primes other than p");
  const int d = qexp::basis_dimension(k);
  int lmax = p;
  for (int l : hecke_primes) lmax = std::max(lmax, l);
  const Modulus mod(p, m);
  const auto basis = qexp::miller_basis(k, lmax * (d + kClosureMargin), CoefficientRing::mod_pm(p, m));

  auto hecke = [&](int l) {
    auto om = qexp::operator_matrix(basis, [&](const QSeries& f) { return qexp::hecke_tp(f, k, l); }, mod);
    if (!om.closed) throw InternalError("T_" + std::to_string(l) + " does not preserve M_" + std::to_string(k));
    return om.matrix;
  };
  std::vector<int> labels{p};
  std::vector<PadicMatrix> ops{hecke(p)};
  for (int l : hecke_primes) {
    labels.push_back(l);
    ops.push_back(hecke(l));
  }

  WeightEigenData out{k, 0, PadicMatrix(mod, 0, 0), {}, {}};
  const auto e = ordinary_projector(ops[0]);
  out.rank = static_cast<int>(e.rank);
  out.projector = e.idempotent;

  struct Piece {
    PadicMatrix proj;
    std::string key;
  };
  std::vector<Piece> pieces{{e.idempotent, ""}};
  if (e.rank == 0) pieces.clear();
  const PadicMatrix id = PadicMatrix::identity(mod, static_cast<std::size_t>(d));
  for (std::size_t o = 0; o < ops.size(); ++o) {
    std::vector<Piece> next;
    for (const auto& piece : pieces) {
      std::size_t found = 0;
      for (int lambda = 0; lambda < p; ++lambda) {
        const PadicMatrix shifted = ops[o] - id.scaled(mod.reduce(lambda));
        const PadicMatrix gen = id - ordinary_projector(shifted).idempotent;
        const PadicMatrix q = piece.proj * gen;
        const std::size_t r = rank_mod_p(q);
        if (r == 0) continue;
        found += r;
        const std::string name = o == 0 ? "a_p" : "a_" + std::to_string(labels[o]);
        next.push_back({q, piece.key + (piece.key.empty() ? "" : ",") + name + "=" + std::to_string(lambda)});
      }
      if (found != rank_mod_p(piece.proj))
        out.ambiguities.push_back("weight " + std::to_string(k) + ": " + piece.key +
                                  " has eigenvalues of T_" + std::to_string(labels[o]) + " outside F_p");
    }
    pieces = std::move(next);
  }

  for (const auto& piece : pieces) {
    EigenSystem sys;
    sys.key = piece.key;
    sys.rank = static_cast<int>(rank_mod_p(piece.proj));
    if (sys.rank == 1) {
      for (std::size_t o = 0; o < ops.size(); ++o) {
        const PadicScalar a(mod, (ops[o] * piece.proj).trace());
        sys.values.emplace(labels[o], o == 0 ? unit_root(a, k) : a);
      }
    } else {
      out.ambiguities.push_back("weight " + std::to_string(k) + ": " + std::to_string(sys.rank) +
                                " ordinary systems congruent mod p at " + piece.key);
    }
    out.systems.push_back(std::move(sys));
  }
  return out;
}

bool OrdinaryFamily::passed() const {
  if (!round_trip || !ambiguities.empty()) return false;
  return std::all_of(congruence_checks.begin(), congruence_checks.end(), [](const auto& c) { return c.holds; });
}

OrdinaryFamily fit_family(int p, int component, const std::vector<int>& weights, const std::vector<int>& hecke_primes,
                          int m) {
  qexp::require_supported_prime(p);
  if (weights.empty()) throw InvalidArgument("fit_family: no sample weights");
  if (std::set<int>(weights.begin(), weights.end()).size() != weights.size())
    throw InvalidArgument("fit_family: repeated sample weight");
  for (int k : weights) {
    if (k < 3) throw InvalidArgument("fit_family: sample weight " + std::to_string(k) + " is below 3");
    if (((k % (p - 1)) + (p - 1)) % (p - 1) != component)
      throw InvalidArgument("fit_family: weight " + std::to_string(k) + " is not on component " +
                            std::to_string(component));
  }

  OrdinaryFamily fam;
  fam.p = p;
  fam.component = component;
  fam.m = m;
  fam.weights = weights;
  std::sort(fam.weights.begin(), fam.weights.end());
  fam.hecke_primes = hecke_primes;

  std::vector<WeightEigenData> data;
  for (int k : fam.weights) data.push_back(ordinary_eigen_data(k, p, hecke_primes, m));
  fam.rank = data.front().rank;
  for (const auto& d : data) {
    if (d.rank != fam.rank)
      throw VerificationError("ordinary rank " + std::to_string(d.rank) + " at weight " + std::to_string(d.k) +
                              " differs from rank " + std::to_string(fam.rank) + " at weight " +
                              std::to_string(data.front().k));
    fam.ambiguities.insert(fam.ambiguities.end(), d.ambiguities.begin(), d.ambiguities.end());
  }

  std::vector<int> labels{p};
  labels.insert(labels.end(), hecke_primes.begin(), hecke_primes.end());
  for (const auto& sys : data.front().systems) {
    if (sys.rank != 1) continue;
    FamilySystem fs;
    fs.key = sys.key;
    for (const auto& d : data) {
      const auto it = std::find_if(d.systems.begin(), d.systems.end(), [&](const auto& s) { return s.key == sys.key; });
      if (it == d.systems.end())
        throw VerificationError("eigensystem " + sys.key + " has no match at weight " + std::to_string(d.k));
      if (it->rank != 1) break;
      for (int l : labels) fs.values[l].push_back(it->values.at(l));
    }
    if (fs.values[p].size() != data.size()) continue;
    for (int l : labels) {
      fs.fitted.emplace(l, iwasawa_interpolate(p, component, fam.weights, fs.values[l]));
      const auto& fit = fs.fitted.at(l);
      for (std::size_t j = 0; j < fam.weights.size(); ++j) {
        const PadicScalar back = iwasawa_specialize(fit, fam.weights[j]);
        if (!back.congruent(fs.values[l][j])) fam.round_trip = false;
      }
    }
    for (std::size_t a = 0; a < fam.weights.size(); ++a)
      for (std::size_t b = a + 1; b < fam.weights.size(); ++b) {
        const int digits = std::min(m, weight_gap_valuation(p, fam.weights[a], fam.weights[b]));
        for (int l : labels)
          fam.congruence_checks.push_back({fs.key, l, fam.weights[a], fam.weights[b], digits,
                                           fs.values[l][a].congruent(fs.values[l][b], digits)});
      }
    fam.systems.push_back(std::move(fs));
  }
  return fam;
}

}  // namespace slopekit::hida
