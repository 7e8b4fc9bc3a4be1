#include "oracles.hpp"

#include "ssalab/io.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <random>
#include <sstream>

using namespace ssalab;

namespace {

TimeSeries parse(const std::string& text) {
  std::istringstream in(text);
  return read_series_csv(in);
}

}  // namespace

TEST(SeriesCsv, HeaderAndBlankLines) {
  EXPECT_EQ(parse("value\n1\n2.5\n\n-3e2\n").to_vector(), (std::vector<double>{1, 2.5, -300}));
  EXPECT_EQ(parse("1\n2\n3").to_vector(), (std::vector<double>{1, 2, 3}));
  EXPECT_EQ(parse(" 1 \r\n+2\r\n3\r\n").to_vector(), (std::vector<double>{1, 2, 3}));
}

TEST(SeriesCsv, Rejections) {
  EXPECT_THROW(parse("1\nnan\n3\n4\n"), ParseError);
  EXPECT_THROW(parse("1\ninf\n3\n4\n"), ParseError);
  EXPECT_THROW(parse("1\n2\n"), ParseError);
  EXPECT_THROW(parse("h1\nh2\n1\n2\n3\n"), ParseError);
  EXPECT_THROW(parse("1\nx\n3\n4\n"), ParseError);
  EXPECT_THROW(read_series_csv(std::filesystem::path("/nonexistent/dir/file.csv")), IoError);
}

TEST(SeriesCsv, WriteReadRoundTripIsExact) {
  std::mt19937_64 gen(1);
  const TimeSeries f(Eigen::VectorXd(oracle::random_matrix(50, 1, gen)));
  std::ostringstream out;
  write_series_csv(out, f);
  EXPECT_EQ(parse(out.str()).values(), f.values());
}

TEST(EigentripleJson, RoundTripIsExact) {
  std::mt19937_64 gen(2);
  const TimeSeries f(Eigen::VectorXd(oracle::random_matrix(30, 1, gen)));
  const auto ets = decompose(embed(f, 12));
  const std::string text = eigentriples_to_json(ets);
  const auto j = nlohmann::json::parse(text);
  EXPECT_EQ(j.at("method"), "basic");
  EXPECT_EQ(j.at("L"), 12);
  EXPECT_EQ(j.at("K"), 19);
  EXPECT_EQ(j.at("sigmas").size(), ets.size());
  const auto back = eigentriples_from_json(text);
  ASSERT_EQ(back.size(), ets.size());
  for (std::size_t i = 0; i < ets.size(); ++i) {
    EXPECT_EQ(back.triples[i].sigma, ets.triples[i].sigma);
    EXPECT_EQ(back.triples[i].u, ets.triples[i].u);
    EXPECT_EQ(back.triples[i].v, ets.triples[i].v);
  }
  EXPECT_THROW(eigentriples_from_json("{\"method\":\"basic\"}"), ParseError);
  EXPECT_THROW(eigentriples_from_json("not json"), ParseError);
}

TEST(SignalModelJson, Layout) {
  SignalModel m;
  m.terms.push_back({{0.5, -0.25}, {{1.0, 2.0}, {3.0, 0.0}}});
  const auto j = nlohmann::json::parse(signal_model_to_json(m));
  ASSERT_TRUE(j.is_array());
  EXPECT_EQ(j[0].at("re"), 0.5);
  EXPECT_EQ(j[0].at("im"), -0.25);
  EXPECT_EQ(j[0].at("multiplicity"), 2);
  EXPECT_EQ(j[0].at("coefficients")[0][1], 2.0);
}

TEST(ParamCsv, Columns) {
  std::ostringstream out;
  write_params_csv(out, {{0.1, -0.01, 0.99}});
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "frequency,damping,modulus");
  EXPECT_NE(out.str().find("0.100000000000"), std::string::npos);
}

TEST(PseudospectrumCsv, Columns) {
  Pseudospectrum ps;
  ps.grid = {0.0, 0.5};
  ps.values = {1.0, 2.0};
  std::ostringstream out;
  write_pseudospectrum_csv(out, ps);
  EXPECT_EQ(out.str(), "omega,value\n0,1\n0.5,2\n");
}
