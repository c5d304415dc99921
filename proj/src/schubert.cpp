#include "reallines/schubert.hpp"

#include <stdexcept>

#include <boost/math/constants/constants.hpp>

namespace reallines::schubert {

Int double_factorial(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  Int r = 1;
  for (int k = 3; k <= 2 * n - 1; k += 2) r *= k;
  return r;
}

void CohomologyClass::add(Partition2 part, const Int& c) {
  if (part.p > n_ || part.q > part.p || part.q < 0)
    throw std::invalid_argument("partition out of range");
  if (c == 0) return;
  auto it = terms_.find(part);
  if (it == terms_.end()) {
    terms_.emplace(part, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Int CohomologyClass::coefficient(Partition2 part) const {
  auto it = terms_.find(part);
  return it == terms_.end() ? Int(0) : it->second;
}

CohomologyClass pieri_multiply(const CohomologyClass& cls, PieriClass by) {
  CohomologyClass out(cls.n());
  for (const auto& [part, c] : cls.terms()) {
    if (by == PieriClass::sigma1) {
      if (part.p + 1 <= cls.n()) out.add({part.p + 1, part.q}, c);
      if (part.q + 1 <= part.p) out.add({part.p, part.q + 1}, c);
    } else {
      if (part.p + 1 <= cls.n()) out.add({part.p + 1, part.q + 1}, c);
    }
  }
  return out;
}

SymmetricProduct top_chern_product(int d) {
  if (d < 1 || d % 2 == 0) throw std::invalid_argument("d must be odd, >= 1");
  // prod_{k=0}^{d} (k*a + (d-k)*b), indexed by the power of a.
  std::vector<Int> c{1};
  for (int k = 0; k <= d; ++k) {
    std::vector<Int> next(c.size() + 1, Int(0));
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i] * (d - k);
      next[i + 1] += c[i] * k;
    }
    c = std::move(next);
  }
  return {d + 1, std::move(c)};
}

namespace {

// Monomial e1^a1 e2^a2 in the elementary symmetric polynomials of (a, b).
struct ElemMonomial {
  int e1 = 0;
  int e2 = 0;
  Int coeff;
};

// Coefficients (by power of a) of e1^a1 e2^a2 = (a+b)^a1 (ab)^a2.
std::vector<Int> expand_elem(int a1, int a2) {
  std::vector<Int> binom(a1 + 1);
  binom[0] = 1;
  for (int k = 1; k <= a1; ++k)
    binom[k] = binom[k - 1] * (a1 - k + 1) / k;
  std::vector<Int> out(a1 + 2 * a2 + 1, Int(0));
  for (int k = 0; k <= a1; ++k) out[k + a2] = binom[k];
  return out;
}

// Rewrite a symmetric homogeneous polynomial in (a, b) as a combination of
// e1 = a+b and e2 = ab, by descending-lex elimination of leading terms.
std::vector<ElemMonomial> symmetric_to_elementary(const SymmetricProduct& s) {
  std::vector<Int> work = s.coeffs_ab;
  const int deg = s.degree;
  std::vector<ElemMonomial> out;
  for (int i = deg; 2 * i >= deg; --i) {
    if (work[i] == 0) continue;
    Int c = work[i];
    int a1 = 2 * i - deg;  // power of e1
    int a2 = deg - i;      // power of e2
    auto ex = expand_elem(a1, a2);
    for (size_t k = 0; k < ex.size(); ++k) work[k] -= c * ex[k];
    out.push_back({a1, a2, c});
  }
  for (const auto& w : work)
    if (w != 0) throw std::logic_error("symmetric decomposition left residue");
  return out;
}

}  // namespace

Int n_complex(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int d = 2 * n - 1;
  auto decomposition = symmetric_to_elementary(top_chern_product(d));
  Int total = 0;
  for (const auto& mono : decomposition) {
    CohomologyClass cls = CohomologyClass::unit(n);
    for (int k = 0; k < mono.e1; ++k)
      cls = pieri_multiply(cls, PieriClass::sigma1);
    for (int k = 0; k < mono.e2; ++k)
      cls = pieri_multiply(cls, PieriClass::sigma11);
    total += mono.coeff * cls.coefficient({n, n});
  }
  return total;
}

Int n_complex_oracle(int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const int d = 2 * n - 1;
  std::vector<Int> c{1};  // indexed by power of a
  for (int k = 0; k <= d; ++k) {
    std::vector<Int> next(c.size() + 1, Int(0));
    for (size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i] * (d - k);
      next[i + 1] += c[i] * k;
    }
    c = std::move(next);
  }
  // Multiply by (a - b): coefficient of a^{n+1} b^n is c[n] - c[n+1].
  return c[n] - c[n + 1];
}

ResidueTable residue_table(int n_max, int q) {
  if (q < 1 || n_max < 1) throw std::invalid_argument("bad residue request");
  ResidueTable table;
  table.q = q;
  table.modulus = std::uint64_t(1) << q;
  table.rows.reserve(n_max);
  table.mod4_coincide = true;
  for (int n = 1; n <= n_max; ++n) {
    Int nc = n_complex(n);
    Int ne = double_factorial(n);
    if (nc % 4 != ne % 4) table.mod4_coincide = false;
    table.rows.push_back(
        {n, static_cast<std::uint64_t>(nc % table.modulus),
         static_cast<std::uint64_t>(ne % table.modulus)});
  }
  const int period = static_cast<int>(table.modulus);
  auto periodic = [&](auto get) {
    for (size_t i = 0; i + period < table.rows.size(); ++i)
      if (get(table.rows[i]) != get(table.rows[i + period])) return false;
    return table.rows.size() > static_cast<size_t>(period);
  };
  table.n_complex_periodic =
      periodic([](const ResidueRow& r) { return r.n_complex_mod; });
  table.n_euler_periodic =
      periodic([](const ResidueRow& r) { return r.n_euler_mod; });
  return table;
}

bool matches_rotated_pattern(const std::vector<std::uint64_t>& sequence,
                             const std::vector<std::uint64_t>& pattern) {
  const size_t p = pattern.size();
  if (p == 0 || sequence.size() < p) return false;
  for (size_t shift = 0; shift < p; ++shift) {
    bool ok = true;
    for (size_t i = 0; i < sequence.size() && ok; ++i)
      if (sequence[i] != pattern[(i + shift) % p]) ok = false;
    if (ok) return true;
  }
  return false;
}

ZagierComparison zagier_asymptote(int n) {
  if (n < 2) throw std::invalid_argument("n must be >= 2");
  const Real50 pi = boost::math::constants::pi<Real50>();
  Real50 base(2 * n - 1);
  Real50 exponent = Real50(2 * n) - Real50(3) / 2;
  Real50 estimate = sqrt(Real50(27) / pi) * pow(base, exponent);
  Real50 lr = log(Real50(n_complex(n))) - log(estimate);
  return {estimate, static_cast<double>(lr)};
}

}  // namespace reallines::schubert
