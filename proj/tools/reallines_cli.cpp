#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "reallines/pipeline.hpp"
#include "reallines/schubert.hpp"
#include "reallines/surface_io.hpp"

namespace rl = reallines;
namespace sch = reallines::schubert;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 2;
constexpr int kExitGenericity = 3;
constexpr int kExitDegenerate = 4;

constexpr std::uint64_t kDefaultSeed = 20120514;

json report_envelope(const std::string& command, std::uint64_t seed,
                     const std::string& inputs_digest, json payload,
                     json invariant_checks, bool deterministic) {
  json out = {{"schema_version", "1"},
              {"command", command},
              {"seed", seed},
              {"inputs_digest", inputs_digest},
              {"payload", std::move(payload)},
              {"invariant_checks", std::move(invariant_checks)}};
  if (!deterministic) {
    auto now = std::chrono::system_clock::now().time_since_epoch();
    out["timestamp"] =
        std::chrono::duration_cast<std::chrono::seconds>(now).count();
  }
  return out;
}

void emit(const json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::ofstream out(out_path);
    out << report.dump(2) << "\n";
  }
}

json check(const std::string& name, bool pass, const std::string& details) {
  return {{"name", name}, {"pass", pass}, {"details", details}};
}

int run_count(int n, const std::string& out_path, bool deterministic) {
  sch::Int nc = sch::n_complex(n);
  sch::Int oracle = sch::n_complex_oracle(n);
  sch::Int ne = sch::double_factorial(n);
  json payload = {{"n", n},
                  {"n_complex", nc.str()},
                  {"n_complex_oracle", oracle.str()},
                  {"n_euler", ne.str()},
                  {"n_complex_mod4", static_cast<int>(nc % 4)},
                  {"n_euler_mod4", static_cast<int>(ne % 4)}};
  if (n >= 2) {
    auto z = sch::zagier_asymptote(n);
    payload["zagier_estimate"] = z.estimate.str(20);
    payload["zagier_log_ratio"] = z.log_ratio;
  }
  json checks = json::array();
  checks.push_back(check("cross_engine_equal", nc == oracle,
                         nc.str() + " vs " + oracle.str()));
  checks.push_back(check("mod4_coincide", nc % 4 == ne % 4, ""));
  json report = report_envelope("count", kDefaultSeed,
                                rl::digest_hex(std::to_string(n)),
                                payload, checks, deterministic);
  emit(report, out_path);
  for (const auto& c : report["invariant_checks"])
    if (!c["pass"].get<bool>()) return 1;
  return kExitOk;
}

json solve_payload(const rl::EnumerationReport& rep) {
  return rl::report_to_json(rep);
}

int run_solve(const std::string& input, std::uint64_t seed, bool slow,
              const std::string& out_path, bool deterministic, bool verify) {
  rl::SurfaceFile surface;
  try {
    surface = rl::load_surface(input);
  } catch (const rl::SurfaceParseError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  }
  auto f = rl::surface_to_polynomial(surface);
  int n = 0;
  try {
    n = rl::pipeline_dimension(f);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  }
  if (n >= 3 && !slow) {
    std::cerr << "error: n >= 3 tracks " << (2 * n - 1) << "^" << 2 * n
              << " paths; pass --slow to allow\n";
    return kExitParse;
  }

  try {
    rl::TrackSettings settings;
    auto rep = rl::run_pipeline(f, seed, settings);
    json checks = json::array();
    const long ne = static_cast<long>(
        sch::double_factorial(n).convert_to<long long>());
    checks.push_back(check("signed_sum_abs",
                           rep.signed_sum_abs == ne,
                           std::to_string(rep.signed_sum_abs) + " vs " +
                               std::to_string(ne)));
    checks.push_back(check("real_count_lower_bound", rep.n_real >= ne, ""));
    checks.push_back(check(
        "conjugation_pairing",
        (rep.n_complex_found - rep.n_real) % 2 == 0, ""));
    if (verify) {
      if (n == 2) {
        bool magic = rep.h && rep.e && *rep.h == rep.n_plus &&
                     *rep.e == rep.n_minus;
        checks.push_back(check("magic_identity", magic, "h=N+, e=N-"));
        bool schlafli = rep.n_real == 3 || rep.n_real == 7 ||
                        rep.n_real == 15 || rep.n_real == 27;
        checks.push_back(check("schlafli_values", schlafli,
                               "n_real=" + std::to_string(rep.n_real)));
        // Hyperbolic lines carry index +1, elliptic lines -1.
        bool segre_sign = true;
        for (const auto& rec : rep.lines) {
          if (!rec.segre) continue;
          if ((rec.jac_det > 0) !=
              (*rec.segre == rl::SegreType::hyperbolic))
            segre_sign = false;
        }
        checks.push_back(check("segre_index_opposite", segre_sign, ""));
      }
      // Projective invariance under a second seeded change of coordinates.
      auto M = rl::random_projective_change(n + 2, seed + 7777);
      auto rep2 = rl::run_pipeline(rl::apply_projective_change(f, M),
                                   seed + 1, rl::TrackSettings{});
      bool invariant = rep2.n_real == rep.n_real &&
                       rep2.n_plus == rep.n_plus &&
                       rep2.n_minus == rep.n_minus;
      checks.push_back(check("projective_invariance", invariant, ""));
    }
    std::string dump = rl::surface_to_json(surface).dump();
    json report = report_envelope(verify ? "verify" : "solve", seed,
                                  rl::digest_hex(dump), solve_payload(rep),
                                  checks, deterministic);
    emit(report, out_path);
    for (const auto& c : report["invariant_checks"])
      if (!c["pass"].get<bool>()) return 1;
    return kExitOk;
  } catch (const rl::GenericityFailure& ex) {
    std::cerr << "genericity failure: " << ex.what() << "\n";
    return kExitGenericity;
  } catch (const rl::AmbiguousReality& ex) {
    std::cerr << "ambiguous reality: " << ex.what() << "\n";
    return kExitDegenerate;
  } catch (const rl::NonSimpleZero& ex) {
    std::cerr << "non-simple zero: " << ex.what() << "\n";
    return kExitDegenerate;
  } catch (const rl::DegenerateSpecies& ex) {
    std::cerr << "degenerate species: " << ex.what() << "\n";
    return kExitDegenerate;
  }
}

int run_congruences(int n_max, int q, const std::string& out_path,
                    bool deterministic) {
  auto table = sch::residue_table(n_max, q);
  json rows = json::array();
  std::vector<std::uint64_t> nc_seq, ne_seq;
  for (const auto& row : table.rows) {
    rows.push_back({{"n", row.n},
                    {"n_complex_mod", row.n_complex_mod},
                    {"n_euler_mod", row.n_euler_mod}});
    nc_seq.push_back(row.n_complex_mod);
    ne_seq.push_back(row.n_euler_mod);
  }
  json payload = {{"q", q},
                  {"modulus", table.modulus},
                  {"rows", rows},
                  {"n_complex_periodic", table.n_complex_periodic},
                  {"n_euler_periodic", table.n_euler_periodic},
                  {"mod4_coincide", table.mod4_coincide}};
  json checks = json::array();
  checks.push_back(check("mod4_coincide", table.mod4_coincide, ""));
  if (q == 3) {
    bool nc_rot = sch::matches_rotated_pattern(nc_seq, {1, 1, 3, 3, 5, 5, 7, 7});
    bool ne_rot = sch::matches_rotated_pattern(ne_seq, {1, 1, 3, 7});
    payload["n_complex_rotation_match"] = nc_rot;
    payload["n_euler_rotation_match"] = ne_rot;
    checks.push_back(check("mod8_rotation_match", nc_rot && ne_rot, ""));
  }
  json report = report_envelope(
      "congruences", kDefaultSeed,
      rl::digest_hex(std::to_string(n_max) + ":" + std::to_string(q)),
      payload, checks, deterministic);
  emit(report, out_path);
  for (const auto& c : report["invariant_checks"])
    if (!c["pass"].get<bool>()) return 1;
  return kExitOk;
}

int run_fixture(const std::string& name, int n, std::uint64_t seed,
                const std::string& out_path) {
  try {
    auto surface = rl::fixture_surface(name, n, seed);
    if (out_path.empty()) {
      std::cout << rl::surface_to_json(surface).dump(2) << "\n";
    } else {
      rl::save_surface(surface, out_path);
    }
    return kExitOk;
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"real lines on real projective hypersurfaces of degree 2n-1"};
  app.require_subcommand(1);

  int n = 2;
  auto* count = app.add_subcommand("count", "exact line counts for given n");
  count->add_option("--n", n, "Grassmannian parameter n")
      ->required()
      ->check(CLI::Range(1, 128));

  std::string input, out_path;
  std::uint64_t seed = kDefaultSeed;
  bool slow = false, deterministic = false;
  auto* solve = app.add_subcommand("solve", "enumerate lines on a surface");
  solve->add_option("--input", input, "surface JSON file")->required();
  solve->add_option("--seed", seed, "RNG seed");
  solve->add_flag("--slow", slow, "allow n >= 3 (many paths)");
  solve->add_option("--out", out_path, "write report here instead of stdout");
  solve->add_flag("--deterministic", deterministic, "suppress timestamp");

  auto* verify = app.add_subcommand(
      "verify", "solve plus the full invariant battery");
  verify->add_option("--input", input, "surface JSON file")->required();
  verify->add_option("--seed", seed, "RNG seed");
  verify->add_flag("--slow", slow, "allow n >= 3");
  verify->add_option("--out", out_path, "write report here");
  verify->add_flag("--deterministic", deterministic, "suppress timestamp");

  int n_max = 16, q = 3;
  auto* congruences = app.add_subcommand(
      "congruences", "residue tables mod 2^q and periodicity verdicts");
  congruences->add_option("--n-max", n_max, "largest n")
      ->required()
      ->check(CLI::Range(1, 256));
  congruences->add_option("--q", q, "modulus exponent")
      ->required()
      ->check(CLI::Range(1, 6));
  congruences->add_flag("--deterministic", deterministic, "");
  congruences->add_option("--out", out_path, "");

  std::string fixture_name;
  auto* fixture = app.add_subcommand("fixture", "emit a fixture surface");
  fixture->add_option("--name", fixture_name, "fermat | clebsch | random")
      ->required();
  fixture->add_option("--n", n, "Grassmannian parameter n")
      ->required()
      ->check(CLI::Range(1, 8));
  fixture->add_option("--seed", seed, "RNG seed (random fixture)");
  fixture->add_option("--out", out_path, "write surface here");

  count->add_option("--out", out_path, "");
  count->add_flag("--deterministic", deterministic, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (count->parsed()) return run_count(n, out_path, deterministic);
    if (solve->parsed())
      return run_solve(input, seed, slow, out_path, deterministic, false);
    if (verify->parsed())
      return run_solve(input, seed, slow, out_path, deterministic, true);
    if (congruences->parsed())
      return run_congruences(n_max, q, out_path, deterministic);
    if (fixture->parsed()) return run_fixture(fixture_name, n, seed, out_path);
  } catch (const std::invalid_argument& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitParse;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return kExitOk;
}
