#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace reallines::schubert {

using Int = boost::multiprecision::cpp_int;
using Real50 = boost::multiprecision::cpp_bin_float_50;

/// (2n-1)!! = 1 * 3 * ... * (2n-1), the signed count of real lines.
Int double_factorial(int n);

/// Schubert basis index sigma_{p,q} on G(2, n+2), with n >= p >= q >= 0.
struct Partition2 {
  int p = 0;
  int q = 0;
  auto operator<=>(const Partition2&) const = default;
};

/// Integer combination of Schubert classes on G(2, n+2).
class CohomologyClass {
 public:
  explicit CohomologyClass(int n) : n_(n) {}

  int n() const { return n_; }
  const std::map<Partition2, Int>& terms() const { return terms_; }

  void add(Partition2 part, const Int& c);
  Int coefficient(Partition2 part) const;

  static CohomologyClass unit(int n) {
    CohomologyClass cls(n);
    cls.add({0, 0}, 1);
    return cls;
  }

 private:
  int n_;
  std::map<Partition2, Int> terms_;
};

enum class PieriClass { sigma1, sigma11 };

/// Pieri rule: sigma1 * s_{p,q} = s_{p+1,q} + s_{p,q+1},
/// sigma11 * s_{p,q} = s_{p+1,q+1}; terms violating n >= p >= q are dropped.
CohomologyClass pieri_multiply(const CohomologyClass& cls, PieriClass by);

/// Expansion of prod_{k=0}^{d} (k*a + (d-k)*b); coeffs_ab[j] is the
/// coefficient of a^j b^{degree-j}. Palindromic by the k <-> d-k symmetry.
struct SymmetricProduct {
  int degree = 0;
  std::vector<Int> coeffs_ab;
};

SymmetricProduct top_chern_product(int d);

/// Number of complex lines on a generic degree-(2n-1) hypersurface in
/// P^{n+1}, computed through the Schubert ring of G(2, n+2).
Int n_complex(int n);

/// Independent check: the same count read off as the a^{n+1} b^n
/// coefficient of (a-b) * prod_{k=0}^{2n-1} (k*a + (2n-1)*b - k*b), by
/// direct convolution with no Schubert ring involved.
Int n_complex_oracle(int n);

struct ResidueRow {
  int n;
  std::uint64_t n_complex_mod;
  std::uint64_t n_euler_mod;
};

struct ResidueTable {
  int q = 0;
  std::uint64_t modulus = 0;
  std::vector<ResidueRow> rows;
  bool n_complex_periodic = false;  // 2^q-periodic over the computed range
  bool n_euler_periodic = false;
  bool mod4_coincide = false;  // N_C == N^e mod 4 over the computed range
};

ResidueTable residue_table(int n_max, int q);

/// True when the sequence is the periodic extension of some cyclic
/// rotation of the pattern.
bool matches_rotated_pattern(const std::vector<std::uint64_t>& sequence,
                             const std::vector<std::uint64_t>& pattern);

struct ZagierComparison {
  Real50 estimate;   // sqrt(27/pi) * (2n-1)^{2n-3/2}
  double log_ratio;  // ln(N_C / estimate)
};

ZagierComparison zagier_asymptote(int n);

}  // namespace reallines::schubert
