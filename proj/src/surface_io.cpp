#include "reallines/surface_io.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

namespace reallines {

using nlohmann::json;

namespace {

std::string format_coeff(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// All exponent vectors of the given length summing to degree, in
// lexicographic order.
void enumerate_exponents(int length, int degree, Exponents& prefix,
                         std::vector<Exponents>& out) {
  if (length == 1) {
    prefix.push_back(degree);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int k = degree; k >= 0; --k) {
    prefix.push_back(k);
    enumerate_exponents(length - 1, degree - k, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

json surface_to_json(const SurfaceFile& s) {
  json terms = json::array();
  for (const auto& t : s.terms)
    terms.push_back({{"exponents", t.exponents}, {"coeff", t.coeff}});
  return {{"schema_version", "1"},
          {"dim", s.dim},
          {"degree", s.degree},
          {"terms", terms}};
}

SurfaceFile surface_from_json(const json& j) {
  try {
    SurfaceFile s;
    s.dim = j.at("dim").get<int>();
    s.degree = j.at("degree").get<int>();
    if (s.dim < 1 || s.degree < 1)
      throw SurfaceParseError("dim and degree must be positive");
    for (const auto& t : j.at("terms")) {
      SurfaceTerm term;
      term.exponents = t.at("exponents").get<std::vector<int>>();
      term.coeff = t.at("coeff").get<std::string>();
      if (static_cast<int>(term.exponents.size()) != s.dim + 1)
        throw SurfaceParseError("exponent vector length must be dim+1");
      int sum = 0;
      for (int e : term.exponents) {
        if (e < 0) throw SurfaceParseError("negative exponent");
        sum += e;
      }
      if (sum != s.degree)
        throw SurfaceParseError("exponents must sum to degree");
      size_t pos = 0;
      double v = std::stod(term.coeff, &pos);
      if (pos != term.coeff.size() || !std::isfinite(v))
        throw SurfaceParseError("coefficient is not a finite decimal");
      s.terms.push_back(std::move(term));
    }
    return s;
  } catch (const json::exception& ex) {
    throw SurfaceParseError(std::string("malformed surface file: ") +
                            ex.what());
  } catch (const std::invalid_argument& ex) {
    throw SurfaceParseError(std::string("malformed coefficient: ") +
                            ex.what());
  }
}

SurfaceFile load_surface(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SurfaceParseError("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw SurfaceParseError(std::string("invalid JSON: ") + ex.what());
  }
  return surface_from_json(j);
}

void save_surface(const SurfaceFile& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << surface_to_json(s).dump(2) << "\n";
}

HomogeneousPolynomial<double> surface_to_polynomial(const SurfaceFile& s) {
  HomogeneousPolynomial<double> f(s.dim + 1, s.degree);
  for (const auto& t : s.terms) f.add_term(t.exponents, std::stod(t.coeff));
  return f;
}

SurfaceFile polynomial_to_surface(const HomogeneousPolynomial<double>& f) {
  SurfaceFile s;
  s.dim = f.num_vars() - 1;
  s.degree = f.degree();
  for (const auto& [e, c] : f.terms())
    s.terms.push_back({e, format_coeff(c)});
  return s;
}

SurfaceFile fixture_surface(const std::string& name, int n,
                            std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("fixtures need n >= 2");
  const int m = n + 2;
  const int d = 2 * n - 1;

  if (name == "fermat") {
    HomogeneousPolynomial<double> f(m, d);
    for (int i = 0; i < m; ++i) {
      Exponents e(m, 0);
      e[i] = d;
      f.add_term(e, 1.0);
    }
    return polynomial_to_surface(f);
  }
  if (name == "clebsch") {
    if (n != 2)
      throw std::invalid_argument("the clebsch fixture exists only for n=2");
    HomogeneousPolynomial<double> f(4, 3);
    for (int i = 0; i < 4; ++i) {
      Exponents e(4, 0);
      e[i] = 3;
      f.add_term(e, 1.0);
    }
    HomogeneousPolynomial<double> s(4, 1);
    for (int i = 0; i < 4; ++i) {
      Exponents e(4, 0);
      e[i] = 1;
      s.add_term(e, 1.0);
    }
    auto cube = s * s * s;
    return polynomial_to_surface(f - cube);
  }
  if (name == "random") {
    std::mt19937_64 rng(seed ^ 0xa0761d6478bd642fULL);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    std::vector<Exponents> exps;
    Exponents prefix;
    enumerate_exponents(m, d, prefix, exps);
    HomogeneousPolynomial<double> f(m, d);
    for (const auto& e : exps) f.add_term(e, coeff(rng));
    return polynomial_to_surface(f);
  }
  throw std::invalid_argument("unknown fixture: " + name);
}

json report_to_json(const EnumerationReport& report) {
  json lines = json::array();
  for (const auto& rec : report.lines) {
    json line = {{"params", rec.line.params},
                 {"pivots", {rec.line.pivots.first, rec.line.pivots.second}},
                 {"plucker", rec.plucker.coords},
                 {"index", rec.index},
                 {"jac_det", rec.jac_det},
                 {"residual", rec.residual}};
    if (rec.segre) line["segre"] = to_string(*rec.segre);
    lines.push_back(std::move(line));
  }
  json out = {{"n", report.n},
              {"degree", report.degree},
              {"n_complex_expected", report.n_complex_expected},
              {"n_complex_found", report.n_complex_found},
              {"n_real", report.n_real},
              {"n_plus", report.n_plus},
              {"n_minus", report.n_minus},
              {"signed_sum_raw", report.signed_sum},
              {"signed_sum", report.signed_sum_abs},
              {"seed", report.seed},
              {"failures", report.failures},
              {"lines", std::move(lines)}};
  if (report.h) out["h"] = *report.h;
  if (report.e) out["e"] = *report.e;
  return out;
}

std::string digest_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace reallines
