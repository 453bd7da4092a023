#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "geomdep/classifier.hpp"
#include "geomdep/errors.hpp"
#include "geomdep/io.hpp"
#include "geomdep/rng.hpp"

using namespace geomdep;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    RngStream rng(static_cast<std::uint64_t>(std::hash<std::string>{}(fs::current_path().string())), 1);
    path = fs::temp_directory_path() / ("geomdep_io_" + std::to_string(rng.next_u64()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("point CSV round trip is exact") {
    TempDir dir;
    RngStream rng(1, 1);
    PointCloud pts;
    for (int i = 0; i < 200; ++i) {
      pts.x.push_back(rng.exponential());
      pts.y.push_back(rng.exponential() * 1e-7);
    }
    write_points_csv(dir.file("p.csv"), pts);
    const auto back = read_points_csv(dir.file("p.csv"));
    CHECK(back.x == pts.x);
    CHECK(back.y == pts.y);
  }

  TEST_CASE("column order, extra columns and a byte-order mark") {
    TempDir dir;
    write(dir.file("a.csv"), "\xEF\xBB\xBFid, y ,x\n1,2.5,0.5\n2,1,3\n\n");
    const auto pts = read_points_csv(dir.file("a.csv"));
    REQUIRE(pts.size() == 2);
    CHECK(pts.x[0] == 0.5);
    CHECK(pts.y[0] == 2.5);
    CHECK(pts.x[1] == 3.0);
  }

  TEST_CASE("malformed point files") {
    TempDir dir;
    write(dir.file("h.csv"), "a,b\n1,2\n");
    CHECK_THROWS_AS(read_points_csv(dir.file("h.csv")), DomainError);
    write(dir.file("n.csv"), "x,y\n1,-2\n");
    CHECK_THROWS_AS(read_points_csv(dir.file("n.csv")), DomainError);
    write(dir.file("t.csv"), "x,y\n1,abc\n");
    CHECK_THROWS_AS(read_points_csv(dir.file("t.csv")), DomainError);
    write(dir.file("i.csv"), "x,y\n1,inf\n");
    CHECK_THROWS_AS(read_points_csv(dir.file("i.csv")), DomainError);
    write(dir.file("m.csv"), "x,y\n1\n");
    CHECK_THROWS_AS(read_points_csv(dir.file("m.csv")), DomainError);
    write(dir.file("e.csv"), "");
    CHECK_THROWS_AS(read_points_csv(dir.file("e.csv")), DomainError);
    CHECK_THROWS_AS(read_points_csv(dir.file("missing.csv")), DomainError);
  }

  TEST_CASE("rank transform") {
    PointCloud pts{{10.0, 30.0, 20.0, 20.0}, {1.0, 2.0, 3.0, 4.0}};
    const auto e = rank_transform_exponential(pts);
    CHECK(e.x[0] == doctest::Approx(-std::log(1.0 - 1.0 / 5.0)));
    CHECK(e.x[1] == doctest::Approx(-std::log(1.0 - 4.0 / 5.0)));
    CHECK(e.x[2] == doctest::Approx(-std::log(1.0 - 2.5 / 5.0)));
    CHECK(e.x[2] == e.x[3]);
    CHECK(e.y[3] == doctest::Approx(std::log(5.0)));
  }

  TEST_CASE("threshold CSV and JSON round trips") {
    TempDir dir;
    ThresholdFunction thr({0.0, 0.3333333333333333, 1.0}, {4.1, 5.123456789012345, 3.9});
    write_threshold_csv(dir.file("t.csv"), thr);
    const auto back = read_threshold_csv(dir.file("t.csv"));
    CHECK(back.knots() == thr.knots());
    CHECK(back.values() == thr.values());
    const auto j = threshold_from_json(nlohmann::json::parse(to_json(thr).dump()));
    CHECK(j.values() == thr.values());
    CHECK_THROWS_AS(threshold_from_json(nlohmann::json{{"knots", {0.0}}}), DomainError);
  }

  TEST_CASE("fit JSON round trip") {
    FitResult fr;
    fr.family = ModelKind::ExpGa;
    fr.names = {"lambda", "rho", "gamma"};
    fr.estimates = {2.123456789012345, 0.456, 0.987654321};
    fr.nll = 1234.5;
    fr.aic = 2475.0;
    fr.converged = true;
    fr.iterations = 321;
    fr.starts_converged = 3;
    fr.n_exceed = 250;
    fr.standard_errors = std::vector<double>{0.1, std::nan(""), 0.02};
    fr.message = "converged";
    const auto j = nlohmann::json::parse(to_json(fr).dump());
    CHECK(j["estimates"]["rho"] == 0.456);
    CHECK(j["standard_errors"]["rho"] == "nan");
    const auto back = fit_from_json(j);
    CHECK(back.family == fr.family);
    CHECK(back.names == fr.names);
    CHECK(back.estimates == fr.estimates);
    CHECK(back.nll == fr.nll);
    CHECK(back.n_exceed == 250);
    REQUIRE(back.standard_errors.has_value());
    CHECK(std::isnan((*back.standard_errors)[1]));
    CHECK_THROWS_AS(fit_from_json(nlohmann::json{{"family", "mm"}}), DomainError);
    CHECK_THROWS_AS(fit_from_json(nlohmann::json{{"family", "nope"}, {"estimates", {{"lambda", 1.0}}}}), DomainError);
  }

  TEST_CASE("classification JSON") {
    const auto j = to_json(classify(make_logistic(0.5)));
    CHECK(j["label"] == "AD");
    CHECK(j["mechanism"] == to_string(Mechanism::Pointy));
    CHECK(j["chi_lower"].get<double>() == doctest::Approx(2.0 / 3.0));
    CHECK(j["intersections"].size() == 2);
    CHECK(j["intersections"][0]["side"] == "k");
    const auto ai = to_json(classify(make_inverted_logistic(0.5)));
    CHECK(ai["label"] == "AI");
    CHECK(ai["chi_upper"] == 0.0);
  }

  TEST_CASE("non-finite numbers survive as strings") {
    CHECK(number_or_string(std::nan("")) == "nan");
    CHECK(number_or_string(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(std::isinf(number_from_json("inf")));
    CHECK(number_from_json(2.5) == 2.5);
    CHECK_THROWS_AS(number_from_json("abc"), DomainError);
  }
}
