#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reallines/chart.hpp"
#include "reallines/homotopy.hpp"
#include "reallines/polynomial.hpp"

namespace reallines {

struct GenericityFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AmbiguousReality : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonSimpleZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateSpecies : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SegreType { hyperbolic, elliptic };

inline const char* to_string(SegreType t) {
  return t == SegreType::hyperbolic ? "hyperbolic" : "elliptic";
}

/// Coefficients of q(x,y) = L12^2 - L11 L22 = a x^2 + b xy + c y^2 read off
/// in coordinates where the line is x = y = 0, plus the Gram discriminant
/// ac - b^2/4 (positive iff q is definite).
struct SegreData {
  double a = 0;
  double b = 0;
  double c = 0;
  double gram_disc = 0;
};

struct RealLineRecord {
  ChartedLine<double> line;             // in the solving chart
  PluckerCoords<double> plucker;        // in original coordinates
  int index = 0;                        // sign of jac_det
  double jac_det = 0;
  std::optional<SegreType> segre;       // cubic surfaces only
  double residual = 0;
};

struct EnumerationReport {
  int n = 0;
  int degree = 0;
  long n_complex_expected = 0;
  long n_complex_found = 0;
  int n_real = 0;
  int n_plus = 0;
  int n_minus = 0;
  long signed_sum = 0;      // raw, in the fixed chart convention
  long signed_sum_abs = 0;  // normalized value compared against (2n-1)!!
  std::optional<int> h;
  std::optional<int> e;
  std::vector<RealLineRecord> lines;
  std::uint64_t seed = 0;
  int failures = 0;
};

/// Everything find_complex_lines learned: the seeded projective change, the
/// transformed surface (whose standard chart holds every line), the deduped
/// endpoints in that chart, and each line's identity in original coordinates.
struct ComplexLinesResult {
  int n = 0;
  HomogeneousPolynomial<double> transformed;  // f composed with the change
  Eigen::MatrixXd change;                     // positive-determinant M
  std::pair<int, int> pivots;
  std::vector<Endpoint> endpoints;                   // deduped, finite
  std::vector<PluckerCoords<cplx>> plucker_original; // per endpoint
  int failures = 0;
};

/// Degree and projective dimension checks; returns n with d = 2n-1.
int pipeline_dimension(const HomogeneousPolynomial<double>& f);

ComplexLinesResult find_complex_lines(const HomogeneousPolynomial<double>& f,
                                      std::uint64_t seed,
                                      const TrackSettings& settings);

/// Real endpoints (imaginary norm below tol_real), re-polished by real
/// Newton iteration; verifies conjugate pairing of the rest.
std::vector<ChartedLine<double>> filter_real(const ComplexLinesResult& found,
                                             double tol_real = 1e-8);

/// Sign of the section Jacobian determinant at a real zero, in the fixed
/// chart convention. Throws NonSimpleZero near-degenerate determinants.
std::pair<int, double> line_index(const HomogeneousPolynomial<double>& f,
                                  const ChartedLine<double>& line);

SegreData segre_normal_form(const HomogeneousPolynomial<double>& f,
                            const ChartedLine<double>& line);

SegreType segre_type(const SegreData& data);

EnumerationReport run_pipeline(const HomogeneousPolynomial<double>& f,
                               std::uint64_t seed,
                               const TrackSettings& settings = {});

/// Seeded random projective change with positive determinant, entries
/// uniform in [-1, 1]; rejects near-singular draws.
Eigen::MatrixXd random_projective_change(int size, std::uint64_t seed);

}  // namespace reallines
