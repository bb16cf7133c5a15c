#include "mrtlab/nud.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mrtlab/error.hpp"
#include "mrtlab/rng.hpp"
#include "mrtlab/summation.hpp"

namespace mrtlab {
namespace {

u128 mpz_to_u128(const mpz_class& z) {
  // z mod 2^128 for z >= 0
  mpz_class low64, high64;
  mpz_fdiv_r_2exp(low64.get_mpz_t(), z.get_mpz_t(), 64);
  mpz_fdiv_q_2exp(high64.get_mpz_t(), z.get_mpz_t(), 64);
  mpz_fdiv_r_2exp(high64.get_mpz_t(), high64.get_mpz_t(), 64);
  auto limb64 = [](const mpz_class& v) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, v.get_mpz_t());
    return out;
  };
  return (static_cast<u128>(limb64(high64)) << 64) | limb64(low64);
}

void check_spec_for_ensemble(const SampleSet& set, const MomentSpec& spec) {
  if (!spec.is_constant() && spec.max_lag() >= set.length) {
    std::ostringstream os;
    os << "spec lag " << spec.max_lag() << " exceeds sample length " << set.length;
    throw ArgumentError(os.str());
  }
}

}  // namespace

TorusPoint td_apply(const TorusPoint& p) {
  TorusPoint q = p;
  for (std::size_t j = 1; j < q.coords.size(); ++j) q.coords[j] += p.coords[j - 1];
  return q;
}

u128 binomial_mod_2_128(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return mpz_to_u128(c);
}

TorusPoint td_power(const TorusPoint& p, std::uint64_t r) {
  TorusPoint q = p;
  const std::size_t n = p.coords.size();
  std::vector<u128> binom(n);
  for (std::size_t i = 0; i < n; ++i) binom[i] = binomial_mod_2_128(r, i);
  for (std::size_t j = 0; j < n; ++j) {
    Turns acc;
    for (std::size_t k = 0; k <= j; ++k) acc += binom[j - k] * p.coords[k];
    q.coords[j] = acc;
  }
  return q;
}

std::vector<Turns> sample_nu_d(int d, std::size_t length, std::uint64_t seed, std::uint64_t stream) {
  if (d < 0) throw ArgumentError("sample_nu_d: d must be nonnegative");
  if (length == 0) throw ArgumentError("sample_nu_d: length must be >= 1");
  TorusPoint x;
  x.coords.resize(static_cast<std::size_t>(d) + 1);
  // X_j sits in coordinate d - j, so Z_n = e(sum_j C(n, j) X_j).
  for (int j = 0; j <= d; ++j)
    x.coords[static_cast<std::size_t>(d - j)] = uniform_turns(seed, stream, static_cast<std::uint64_t>(j));
  std::vector<Turns> z(length);
  const std::size_t last = static_cast<std::size_t>(d);
  for (std::size_t n = 0; n < length; ++n) {
    z[n] = x.coords[last];
    // in-place T_d: descending j reads the not-yet-updated x_{j-1}
    for (std::size_t j = last; j >= 1; --j) x.coords[j] += x.coords[j - 1];
  }
  return z;
}

std::vector<Turns> sample_iid(std::size_t length, std::uint64_t seed, std::uint64_t stream) {
  std::vector<Turns> z(length);
  for (std::size_t n = 0; n < length; ++n) z[n] = uniform_turns(seed, stream ^ 0x8000000000000000ULL, n);
  return z;
}

SampleSet sample_set(int d, std::size_t count, std::size_t length, std::uint64_t seed) {
  if (count == 0) throw ArgumentError("sample_set: count must be >= 1");
  SampleSet s;
  s.d = d;
  s.seed = seed;
  s.count = count;
  s.length = length;
  s.phases.reserve(count * length);
  for (std::size_t i = 0; i < count; ++i) {
    auto path = sample_nu_d(d, length, seed, i);
    s.phases.insert(s.phases.end(), path.begin(), path.end());
  }
  return s;
}

std::complex<double> EnsembleAverager::moment(const MomentSpec& spec) const {
  if (spec.is_constant()) return 1;
  check_spec_for_ensemble(*set_, spec);
  ComplexSum acc;
  for (std::size_t i = 0; i < set_->count; ++i) {
    auto path = set_->path(i);
    Turns t;
    for (const auto& term : spec.terms()) t += term.exponent * path[term.lag];
    acc.add(t.unit());
  }
  return acc.value() / static_cast<double>(set_->count);
}

namespace {

struct FamilyNode {
  std::uint64_t lag;
  long exponent;  // > 0 at depth 0
  int parent;     // index into nodes, -1 at the root
};

// DFS order; every node is a spec (path from the root).
std::vector<FamilyNode> family_nodes(std::uint64_t max_lag, std::size_t max_terms, long max_exp) {
  std::vector<FamilyNode> nodes;
  std::function<void(int, std::uint64_t, std::size_t)> rec = [&](int parent, std::uint64_t from, std::size_t depth) {
    if (depth == max_terms) return;
    for (std::uint64_t l = from; l <= max_lag; ++l)
      for (long e = -max_exp; e <= max_exp; ++e) {
        if (e == 0 || (depth == 0 && e < 0)) continue;
        nodes.push_back({l, e, parent});
        rec(static_cast<int>(nodes.size()) - 1, l + 1, depth + 1);
      }
  };
  rec(-1, 0, 0);
  return nodes;
}

MomentSpec node_spec(const std::vector<FamilyNode>& nodes, int i) {
  std::vector<MomentTerm> terms;
  for (; i >= 0; i = nodes[static_cast<std::size_t>(i)].parent)
    terms.push_back({nodes[static_cast<std::size_t>(i)].lag, nodes[static_cast<std::size_t>(i)].exponent});
  return MomentSpec(std::move(terms));
}

}  // namespace

std::vector<MomentSpec> spec_family(std::uint64_t max_lag, std::size_t max_terms, long max_exp) {
  auto nodes = family_nodes(max_lag, max_terms, max_exp);
  std::vector<MomentSpec> out;
  out.reserve(2 * nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back(node_spec(nodes, static_cast<int>(i)));
  for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back(out[i].conjugate());
  return out;
}

void for_each_spec_moment(const SampleSet& set, std::uint64_t max_lag, std::size_t max_terms, long max_exp,
                          const std::function<void(const MomentSpec&, std::complex<double>)>& visit) {
  if (max_terms == 0 || max_exp <= 0) return;
  if (max_lag >= set.length) throw ArgumentError("for_each_spec_moment: max_lag exceeds sample length");
  const auto nodes = family_nodes(max_lag, max_terms, max_exp);
  const std::size_t L = max_lag + 1;
  const std::size_t E = static_cast<std::size_t>(max_exp);
  constexpr std::size_t kBlock = 2048;

  std::vector<ComplexSum> totals(nodes.size());
  std::vector<double> pw_re(L * E * kBlock), pw_im(L * E * kBlock);
  std::vector<double> pre_re((max_terms + 1) * kBlock), pre_im((max_terms + 1) * kBlock);
  std::vector<std::size_t> depth_of(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i)
    depth_of[i] = nodes[i].parent < 0 ? 0 : depth_of[static_cast<std::size_t>(nodes[i].parent)] + 1;

  for (std::size_t b0 = 0; b0 < set.count; b0 += kBlock) {
    const std::size_t B = std::min(kBlock, set.count - b0);
    for (std::size_t i = 0; i < B; ++i) {
      auto path = set.path(b0 + i);
      for (std::size_t l = 0; l < L; ++l)
        for (std::size_t e = 1; e <= E; ++e) {
          const auto z = (static_cast<long>(e) * path[l]).unit();
          pw_re[(l * E + e - 1) * kBlock + i] = z.real();
          pw_im[(l * E + e - 1) * kBlock + i] = z.imag();
        }
    }
    // level 0 prefix is the constant 1
    std::fill_n(pre_re.begin(), B, 1.0);
    std::fill_n(pre_im.begin(), B, 0.0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto& nd = nodes[k];
      const std::size_t dep = depth_of[k];
      const double* pr = pre_re.data() + dep * kBlock;
      const double* pi = pre_im.data() + dep * kBlock;
      double* cr = pre_re.data() + (dep + 1) * kBlock;
      double* ci = pre_im.data() + (dep + 1) * kBlock;
      const std::size_t slot = (nd.lag * E + static_cast<std::size_t>(std::labs(nd.exponent)) - 1) * kBlock;
      const double* wr = pw_re.data() + slot;
      const double* wi = pw_im.data() + slot;
      const double sgn = nd.exponent > 0 ? 1.0 : -1.0;
      double sr[4] = {0, 0, 0, 0}, si[4] = {0, 0, 0, 0};
      std::size_t i = 0;
      for (; i + 4 <= B; i += 4)
        for (std::size_t u = 0; u < 4; ++u) {
          const double a = pr[i + u], bq = pi[i + u], c = wr[i + u], dq = sgn * wi[i + u];
          const double re = a * c - bq * dq, im = a * dq + bq * c;
          cr[i + u] = re;
          ci[i + u] = im;
          sr[u] += re;
          si[u] += im;
        }
      for (; i < B; ++i) {
        const double a = pr[i], bq = pi[i], c = wr[i], dq = sgn * wi[i];
        const double re = a * c - bq * dq, im = a * dq + bq * c;
        cr[i] = re;
        ci[i] = im;
        sr[0] += re;
        si[0] += im;
      }
      totals[k].add({(sr[0] + sr[1]) + (sr[2] + sr[3]), (si[0] + si[1]) + (si[2] + si[3])});
    }
  }
  const double inv = 1.0 / static_cast<double>(set.count);
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    MomentSpec spec = node_spec(nodes, static_cast<int>(k));
    const auto m = totals[k].value() * inv;
    visit(spec, m);
    visit(spec.conjugate(), std::conj(m));
  }
}

std::complex<double> NuDOracle::moment(const MomentSpec& spec) const { return nu_d_moment(*this, spec); }

std::complex<double> nu_d_moment(const NuDOracle& oracle, const MomentSpec& spec) {
  if (oracle.d < 0) throw ArgumentError("nu_d_moment: d must be nonnegative");
  const std::uint64_t top = std::min<std::uint64_t>(static_cast<std::uint64_t>(oracle.d), spec.max_lag());
  mpz_class acc, c;
  for (std::uint64_t l = 0; l <= top; ++l) {
    acc = 0;
    for (const auto& t : spec.terms()) {
      mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(t.lag), static_cast<unsigned long>(l));
      acc += c * t.exponent;
    }
    if (acc != 0) return 0;
  }
  // orders above the largest lag have C(s_i, l) = 0 throughout
  return 1;
}

bool powersum_equivalent(const MomentSpec& spec, int d) {
  mpz_class acc, pw;
  for (int l = 0; l <= d; ++l) {
    acc = 0;
    for (const auto& t : spec.terms()) {
      mpz_class base = static_cast<unsigned long>(t.lag);
      mpz_pow_ui(pw.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(l));  // 0^0 = 1
      acc += pw * t.exponent;
    }
    if (acc != 0) return false;
  }
  return true;
}

bool strong_stationarity_check(int d, const MomentSpec& spec, std::uint64_t r) {
  if (r == 0) throw ArgumentError("strong_stationarity_check: r must be >= 1");
  const NuDOracle o{d};
  return nu_d_moment(o, spec) == nu_d_moment(o, spec.dilated(r));
}

std::optional<int> first_powersum_mismatch(const std::vector<std::uint64_t>& lhs,
                                           const std::vector<std::uint64_t>& rhs, int d) {
  mpz_class a, b, pw;
  for (int l = 0; l <= d; ++l) {
    a = 0;
    b = 0;
    for (auto x : lhs) {
      mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(l));
      a += pw;
    }
    for (auto x : rhs) {
      mpz_ui_pow_ui(pw.get_mpz_t(), static_cast<unsigned long>(x), static_cast<unsigned long>(l));
      b += pw;
    }
    if (a != b) return l;
  }
  return std::nullopt;
}

bool quasi_eigen_relation_check(std::span<const Turns> sample, int d, const std::vector<std::uint64_t>& lhs,
                                const std::vector<std::uint64_t>& rhs, double tol) {
  if (auto bad = first_powersum_mismatch(lhs, rhs, d)) {
    std::ostringstream os;
    os << "quasi_eigen_relation_check: power sums of order " << *bad << " differ";
    throw ArgumentError(os.str());
  }
  std::uint64_t top = 0;
  for (auto x : lhs) top = std::max(top, x);
  for (auto x : rhs) top = std::max(top, x);
  if (top >= sample.size()) throw ArgumentError("quasi_eigen_relation_check: lags exceed sample length");
  for (std::uint64_t n = 0; n + top < sample.size(); ++n) {
    std::complex<double> a = 1, b = 1;
    for (auto x : lhs) a *= sample[x + n].unit();
    for (auto x : rhs) b *= sample[x + n].unit();
    if (!(std::abs(a - b) <= tol)) return false;
  }
  return true;
}

IndependenceReport independence_report(const SampleSet& set, std::size_t window, long max_exponent, double threshold) {
  if (window == 0) throw ArgumentError("independence_report: window must be >= 1");
  if (window > static_cast<std::size_t>(set.d) + 1) {
    std::ostringstream os;
    os << "independence_report: window " << window << " exceeds d+1 = " << set.d + 1;
    throw ArgumentError(os.str());
  }
  IndependenceReport rep;
  rep.d = set.d;
  rep.window = window;
  rep.max_exponent = max_exponent;
  rep.samples = set.count;
  rep.threshold = threshold;
  if (max_exponent <= 0) return rep;
  for_each_spec_moment(set, window - 1, window, max_exponent, [&](const MomentSpec& spec, std::complex<double> m) {
    IndependenceEntry e;
    e.exponents.assign(window, 0);
    for (const auto& t : spec.terms()) e.exponents[t.lag] = t.exponent;
    e.magnitude = std::abs(m);
    rep.max_magnitude = std::max(rep.max_magnitude, e.magnitude);
    rep.entries.push_back(std::move(e));
  });
  std::sort(rep.entries.begin(), rep.entries.end(),
            [](const IndependenceEntry& a, const IndependenceEntry& b) { return a.exponents < b.exponents; });
  rep.passed = rep.max_magnitude <= threshold;
  return rep;
}

}  // namespace mrtlab
