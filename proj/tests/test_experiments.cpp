#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "bergman/errors.hpp"
#include "bergman/experiments.hpp"

using namespace bergman;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "polybergman-tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json small_config(const std::string& out) {
  return nlohmann::json{{"weight", {{"kind", "fock"}}},
                        {"tau", 1.0},
                        {"m_schedule", {4.0, 8.0}},
                        {"n_rule", {{"kind", "round_m_tau"}}},
                        {"z0", {{0.0, 0.0}, {0.3, 0.1}}},
                        {"out", out}};
}

}  // namespace

TEST_CASE("n rule schedules") {
  NRule round;
  CHECK(round.n_for(16.4, 1.0) == 16);
  CHECK(round.n_for(10.0, 0.5) == 5);
  NRule plus;
  plus.kind = "m_tau_plus_M";
  plus.M = 2.0;
  CHECK(plus.n_for(16.0, 1.0) == 18);
  NRule bad;
  bad.kind = "round_m_tau";
  CHECK_THROWS_AS(bad.n_for(0.2, 1.0), ConfigError);
}

TEST_CASE("config validation reports the offending field") {
  CHECK_NOTHROW(parse_config(small_config("x")));

  auto tau = small_config("x");
  tau["tau"] = -1.0;
  CHECK_THROWS_WITH_AS(parse_config(tau), "tau: must be > 0", ConfigError);

  auto sched = small_config("x");
  sched["m_schedule"] = {8.0, 4.0};
  CHECK_THROWS_WITH_AS(parse_config(sched), "m_schedule: must be strictly increasing",
                       ConfigError);

  auto z0 = small_config("x");
  z0["z0"] = {1.0};
  CHECK_THROWS_AS(parse_config(z0), ConfigError);

  auto rule = small_config("x");
  rule["n_rule"] = {{"kind", "fibonacci"}};
  CHECK_THROWS_AS(parse_config(rule), ConfigError);

  auto weight = small_config("x");
  weight["weight"] = {{"kind", "unknown"}};
  CHECK_THROWS_AS(parse_config(weight), ConfigError);

  auto quad = small_config("x");
  quad["quadrature"] = {{"n_radial", 1}};
  CHECK_THROWS_AS(parse_config(quad), ConfigError);
}

TEST_CASE("config hash is canonical") {
  const nlohmann::json a = {{"alpha", 1}, {"beta", 2}};
  nlohmann::json b;
  b["beta"] = 2;
  b["alpha"] = 1;
  CHECK(config_hash(a) == config_hash(b));
  const nlohmann::json cvar = {{"alpha", 1}, {"beta", 3}};
  CHECK(config_hash(a) != config_hash(cvar));
}

TEST_CASE("kernel-diag writes a deterministic table") {
  const auto dir = fresh_dir("kernel_diag");
  const auto config = parse_config(small_config((dir / "out").string()));
  RunOptions opt;
  opt.deterministic = true;
  const auto files = run_kernel_diag(config, opt);
  REQUIRE(files.size() == 1);
  const std::string body = slurp(files[0]);
  CHECK(body.rfind("# config_hash=", 0) == 0);
  CHECK(body.find("version=") != std::string::npos);
  CHECK(body.find("m,n,z0_re,z0_im,one_point,diag_expansion,residual") != std::string::npos);
  // 2 m-values x 2 insertion points
  CHECK(std::count(body.begin(), body.end(), '\n') == 2 + 4);

  // rerun: byte-identical
  const auto files2 = run_kernel_diag(config, opt);
  CHECK(slurp(files2[0]) == body);

  // threaded run: same bytes in the same order
  RunOptions threaded;
  threaded.threads = 3;
  const auto files3 = run_kernel_diag(config, threaded);
  CHECK(slurp(files3[0]) == body);
}

TEST_CASE("gaussian-tv and berezin-conc runners") {
  const auto dir = fresh_dir("tv_conc");
  auto j = small_config((dir / "out").string());
  const auto config = parse_config(j);
  RunOptions opt;
  const auto tv_files = run_gaussian_tv(config, opt);
  CHECK(slurp(tv_files[0]).find("m,n,z0_re,z0_im,tv") != std::string::npos);
  const auto conc_files = run_berezin_conc(config, opt);
  CHECK(slurp(conc_files[0]).find("region_radius,mass_outside") != std::string::npos);
}

TEST_CASE("offdiag runner emits profiles plus a summary") {
  const auto dir = fresh_dir("offdiag");
  auto j = small_config((dir / "out").string());
  j["m_schedule"] = {12.0};
  j["z0"] = {{0.0, 0.0}};
  const auto config = parse_config(j);
  RunOptions opt;
  const auto files = run_offdiag(config, opt);
  REQUIRE(files.size() == 2);
  CHECK(slurp(files[0]).find("distance,log_density,compensation") != std::string::npos);
  CHECK(slurp(files[1]).find("d_K,a_K,fitted_slope") != std::string::npos);
}

TEST_CASE("obstacle runner on a coarse grid") {
  const auto dir = fresh_dir("obstacle");
  auto j = small_config((dir / "out").string());
  j["grid"] = {{"extent", 2.0}, {"spacing", 0.1}};
  const auto config = parse_config(j);
  RunOptions opt;
  const auto files = run_obstacle(config, opt);
  REQUIRE(files.size() == 2);
  CHECK(slurp(files[0]).find("x,y,Q,Qhat,in_droplet") != std::string::npos);
  const std::string summary = slurp(files[1]);
  CHECK(summary.find("radius_estimate") != std::string::npos);
  // coarse fock droplet radius near 1
  std::istringstream is(summary);
  std::string line;
  std::getline(is, line);  // comment
  std::getline(is, line);  // header
  std::getline(is, line);
  const double radius = std::stod(line.substr(0, line.find(',')));
  CHECK(radius == doctest::Approx(1.0).epsilon(0.2));
}

TEST_CASE("fock runners") {
  const auto dir = fresh_dir("fock");
  auto j = small_config((dir / "out").string());
  j["m_schedule"] = {8.0, 16.0};
  j["z0"] = {{1.5, 0.0}};
  j["orders"] = {0, 1};
  j["radii"] = {0.6};
  const auto config = parse_config(j);
  RunOptions opt;
  const auto harmonic = run_fock_harmonic(config, opt);
  const std::string h = slurp(harmonic[0]);
  CHECK(h.find("m,n,schedule,berezin,harmonic,gap") != std::string::npos);
  CHECK(h.find("round_m_tau") != std::string::npos);
  CHECK(h.find("m_tau_plus_sqrt_m") != std::string::npos);

  const auto moments = run_fock_moments(config, opt);
  const std::string mcsv = slurp(moments[0]);
  CHECK(mcsv.find("kind,m,n,order") != std::string::npos);
  CHECK(mcsv.find("pv,") != std::string::npos);
  CHECK(mcsv.find("restricted,") != std::string::npos);
}

TEST_CASE("dbar runner emits json records") {
  const auto dir = fresh_dir("dbar");
  auto j = small_config((dir / "out").string());
  j["m_schedule"] = {8.0};
  const auto config = parse_config(j);
  RunOptions opt;
  const auto files = run_dbar_bound(config, opt);
  const auto body = nlohmann::json::parse(slurp(files[0]));
  CHECK(body.contains("config_hash"));
  CHECK(body.at("records").size() == 1);
  const auto& rec = body.at("records")[0];
  CHECK(rec.at("regime_ok").get<bool>());
  CHECK(rec.at("ratio").get<double>() <= 1.0);
}

TEST_CASE("atomic writes create parents and replace wholly") {
  const auto dir = fresh_dir("atomic");
  const auto path = (dir / "nested" / "file.txt").string();
  write_atomic(path, "alpha");
  CHECK(slurp(path) == "alpha");
  write_atomic(path, "beta");
  CHECK(slurp(path) == "beta");
  CHECK(!fs::exists(path + ".tmp"));
}
