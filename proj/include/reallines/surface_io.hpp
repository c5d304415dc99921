#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reallines/pipeline.hpp"
#include "reallines/polynomial.hpp"

namespace reallines {

/// On-disk surface description: a degree-d form in dim+1 homogeneous
/// coordinates with decimal-string coefficients (diff-able goldens).
struct SurfaceTerm {
  std::vector<int> exponents;
  std::string coeff;
};

struct SurfaceFile {
  int dim = 0;     // the n+1 of P^{n+1}
  int degree = 0;  // 2*(dim-1) - 1 for pipeline commands
  std::vector<SurfaceTerm> terms;
};

struct SurfaceParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

nlohmann::json surface_to_json(const SurfaceFile& s);
SurfaceFile surface_from_json(const nlohmann::json& j);
SurfaceFile load_surface(const std::string& path);
void save_surface(const SurfaceFile& s, const std::string& path);

HomogeneousPolynomial<double> surface_to_polynomial(const SurfaceFile& s);
SurfaceFile polynomial_to_surface(const HomogeneousPolynomial<double>& f);

/// Fixtures. fermat: sum x_i^{2n-1}; clebsch (n=2 only): sum x_i^3 minus
/// (sum x_i)^3 expanded; random: all degree-(2n-1) monomials with seeded
/// coefficients uniform in [-1, 1].
SurfaceFile fixture_surface(const std::string& name, int n,
                            std::uint64_t seed);

nlohmann::json report_to_json(const EnumerationReport& report);

/// FNV-1a digest of a canonical JSON dump, hex-encoded.
std::string digest_hex(const std::string& data);

}  // namespace reallines
