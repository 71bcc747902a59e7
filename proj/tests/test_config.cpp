#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "finsler/errors.hpp"
#include "finsler/metric_spec.hpp"
#include "finsler/report.hpp"

using namespace finsler;

TEST(ParseComplex, Forms) {
  EXPECT_EQ(parse_complex("1"), cplx(1, 0));
  EXPECT_EQ(parse_complex("-2.5"), cplx(-2.5, 0));
  EXPECT_EQ(parse_complex("3i"), cplx(0, 3));
  EXPECT_EQ(parse_complex("i"), cplx(0, 1));
  EXPECT_EQ(parse_complex("-i"), cplx(0, -1));
  EXPECT_EQ(parse_complex("1+2i"), cplx(1, 2));
  EXPECT_EQ(parse_complex("0.5-i"), cplx(0.5, -1));
  EXPECT_EQ(parse_complex(" 1 + 2i "), cplx(1, 2));
  EXPECT_EQ(parse_complex("1e-3+2e+1i"), cplx(1e-3, 20));
  for (const char* bad : {"", "x", "1+", "1+2", "2ii", "+-i"}) EXPECT_THROW(parse_complex(bad), Error) << bad;
  const CVector v = parse_complex_vector("0.5, 1+2i");
  ASSERT_EQ(v.size(), 2);
  EXPECT_EQ(v(1), cplx(1, 2));
}

TEST(Json, ComplexForms) {
  EXPECT_EQ(complex_from_json(json(2.0)), cplx(2, 0));
  EXPECT_EQ(complex_from_json(json("1-i")), cplx(1, -1));
  EXPECT_EQ(complex_from_json(json::array({0.5, 0.25})), cplx(0.5, 0.25));
  EXPECT_THROW(complex_from_json(json::array({1, 2, 3})), Error);
  EXPECT_THROW(vector_from_json(json::array()), Error);
  EXPECT_THROW(point_from_json(json{{"z", {0.1}}}), Error);
}

TEST(MetricSpec, RoundTrip) {
  MetricSpec b;
  b.builtin.name = "lp_finsler";
  b.builtin.n = 2;
  b.n = 2;
  b.builtin.numbers["p"] = 4;
  b.jets_only = true;
  const MetricSpec b2 = MetricSpec::from_json(b.to_json());
  EXPECT_EQ(b2.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(b2.label(), "lp_finsler(2, p=4)");
  EXPECT_FALSE(b2.build().has_analytic());

  MetricSpec h = MetricSpec::from_json(json::parse(R"j({"builtin": {"name": "hermitian_field", "n": 2,
      "params": {"g": [["1 + abs2(z1)", "0"], ["0", "2"]]}}})j"));
  EXPECT_EQ(h.builtin.matrix.size(), 2u);
  EXPECT_EQ(MetricSpec::from_json(h.to_json()).to_json().dump(), h.to_json().dump());

  const MetricSpec d = MetricSpec::from_json(json::parse(R"j({"dsl": {"n": 1, "expr": "abs2(v1)/(1-abs2(z1))^2"}})j"));
  EXPECT_TRUE(d.is_dsl);
  EXPECT_EQ(MetricSpec::from_json(d.to_json()).expr, d.expr);
  EXPECT_THROW(MetricSpec::from_json(json::object()), Error);
  EXPECT_THROW(MetricSpec::from_json(json::parse(R"({"builtin": {"n": 1}})")), Error);
}

TEST(SampleSpec, RoundTripAndModes) {
  SampleSpec s;
  s.count = 7;
  s.seed = 99;
  const SampleSpec s2 = SampleSpec::from_json(s.to_json());
  EXPECT_EQ(s2.seed, 99u);
  EXPECT_EQ(s2.count, 7);
  const auto a = s.generate(2), b = s2.generate(2);
  ASSERT_EQ(a.size(), 7u);
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ((a[i].z - b[i].z).norm(), 0.0);

  SampleSpec g;
  g.mode = "grid";
  g.grid = 4;
  EXPECT_EQ(SampleSpec::from_json(g.to_json()).generate(1).size(), 16u);

  const SampleSpec p = SampleSpec::from_json(json::parse(R"({"points": [{"z": ["0.1"], "v": ["1+i"]}]})"));
  EXPECT_EQ(p.mode, "points");
  EXPECT_EQ(p.generate(1)[0].v(0), cplx(1, 1));
  EXPECT_THROW(p.generate(2), Error);
  EXPECT_THROW(SampleSpec::from_json(json{{"count", 0}}), Error);
  SampleSpec u;
  u.mode = "spiral";
  EXPECT_THROW(u.generate(1), Error);
}

TEST(RunConfig, ValidationAndLoad) {
  const json j = json::parse(R"({"metric": {"builtin": {"name": "euclidean", "n": 2}},
      "samples": {"count": 3, "seed": 5}, "tolerances": {"antisymmetry": 1e-7}, "format": "csv"})");
  const RunConfig c = RunConfig::from_json(j);
  EXPECT_EQ(c.tolerance("antisymmetry", 1), 1e-7);
  EXPECT_EQ(c.tolerance("bianchi", 0.5), 0.5);
  EXPECT_EQ(RunConfig::from_json(c.to_json()).to_json().dump(), c.to_json().dump());

  json bad = j;
  bad["tolerances"]["antisymmetry"] = -1;
  EXPECT_THROW(RunConfig::from_json(bad), Error);
  bad = j;
  bad["format"] = "xml";
  EXPECT_THROW(RunConfig::from_json(bad), Error);
  EXPECT_THROW(RunConfig::from_json(json::object()), Error);

  const std::string path = ::testing::TempDir() + "finsler_config_test.json";
  {
    std::ofstream out(path);
    out << j.dump();
  }
  EXPECT_EQ(RunConfig::load(path).samples.seed, 5u);
  {
    std::ofstream out(path);
    out << "{not json";
  }
  EXPECT_THROW(RunConfig::load(path), Error);
  std::remove(path.c_str());
  EXPECT_THROW(RunConfig::load("/nonexistent/config.json"), Error);
}

TEST(Report, DeterministicWithoutTimestamp) {
  const json cfg{{"n", 1}};
  const json a = make_report("levi", cfg, {{"x", 1.5}}, false);
  const json b = make_report("levi", cfg, {{"x", 1.5}}, false);
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_EQ(a["schema"], 1);
  EXPECT_EQ(a["command"], "levi");
  EXPECT_FALSE(a["metadata"].contains("generated"));
  EXPECT_TRUE(make_report("levi", cfg, json::object())["metadata"].contains("generated"));
}

TEST(Report, PathCsv) {
  const GeodesicPath path = integrate_geodesic(euclidean_metric(1), CVector::Constant(1, 0), CVector::Constant(1, 1), 1.0);
  const std::string csv = path_to_csv(path);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,re_sigma1,im_sigma1,re_dsigma1,im_dsigma1,F");
  EXPECT_EQ(path_to_json(path)["samples"].size(), path.times.size());
}
