#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "csvio.hpp"
#include "gridspec.hpp"
#include "svg.hpp"

TEST_CASE("grid specs") {
  auto g = cli::parse_grid("0:2:0.1");
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(2.0));
  g = cli::parse_grid("0.1,10,1000");
  REQUIRE(g.size() == 3);
  CHECK(g[2] == 1000.0);
  g = cli::parse_grid("5");
  REQUIRE(g.size() == 1);
  CHECK_THROWS(cli::parse_grid("1:2"));
  CHECK_THROWS(cli::parse_grid("1:2:-1"));
  CHECK_THROWS(cli::parse_grid("a,b"));
}

TEST_CASE("config grammar: sections, comments, duplicates, line numbers") {
  {
    std::ofstream f("/tmp/gcnse_t.cfg");
    f << "# top comment\n[se]\nmodel = csbm  # trailing\nr = 10\n\n[sim]\n"
         "n = 5000\n";
  }
  cli::Config cfg = cli::parse_config("/tmp/gcnse_t.cfg");
  REQUIRE(cfg.sections.size() == 2);
  CHECK(cfg.sections[0].first == "se");
  CHECK(cfg.sections[0].second[0].key == "model");
  CHECK(cfg.sections[0].second[0].value == "csbm");
  CHECK(cfg.sections[0].second[1].line == 4);
  CHECK(cfg.sections[1].second[0].key == "n");

  {
    std::ofstream f("/tmp/gcnse_dup.cfg");
    f << "[se]\nr = 1\nr = 2\n";
  }
  CHECK_THROWS_WITH(cli::parse_config("/tmp/gcnse_dup.cfg"),
                    doctest::Contains(":3"));
  {
    std::ofstream f("/tmp/gcnse_nosec.cfg");
    f << "r = 1\n";
  }
  CHECK_THROWS(cli::parse_config("/tmp/gcnse_nosec.cfg"));
}

TEST_CASE("nearest-key suggestion") {
  CHECK(cli::edit_distance("lamda", "lambda") == 1);
  CHECK(cli::suggest("lamda", {"lambda", "alpha", "mu"}) == "lambda");
  CHECK(cli::suggest("zzz", {"lambda", "alpha"}) == "");
}

TEST_CASE("csv writer/reader round trip with deterministic formatting") {
  cli::Table t;
  t.columns = {"a", "b", "note"};
  t.rows.push_back({cli::format_double(0.1), cli::format_double(1e-17), "x"});
  t.rows.push_back({cli::format_double(2.0), "", "y,escaped?"});
  cli::write_csv(t, "/tmp/gcnse_t.csv");
  cli::CsvFile back = cli::read_csv("/tmp/gcnse_t.csv");
  REQUIRE(back.columns.size() == 3);
  CHECK(back.column("b") == 1);
  CHECK(back.column("missing") == -1);
  REQUIRE(back.rows.size() == 2);
  CHECK(std::atof(back.rows[0][0].c_str()) == 0.1);
  CHECK(std::atof(back.rows[0][1].c_str()) == 1e-17);

  std::string json = cli::to_json(t);
  CHECK(json.find("\"a\":0.1") != std::string::npos);
  CHECK(json.find("\"note\":\"x\"") != std::string::npos);
}

TEST_CASE("svg rendering is deterministic and complete") {
  cli::PlotSpec spec;
  spec.title = "demo";
  spec.x_label = "c";
  spec.y_label = "acc";
  cli::PlotSeries line;
  line.style = cli::PlotSeries::Style::Line;
  line.label = "theory";
  line.x = {0.0, 0.5, 1.0};
  line.y = {0.6, 0.8, 0.7};
  line.ybar = {0, 0, 0};
  cli::PlotSeries dots;
  dots.style = cli::PlotSeries::Style::Dots;
  dots.label = "sim";
  dots.x = {0.0, 1.0};
  dots.y = {0.61, 0.69};
  dots.ybar = {0.01, 0.02};
  cli::PlotSeries base;
  base.style = cli::PlotSeries::Style::Dashed;
  base.label = "baseline";
  base.x = {0.0, 1.0};
  base.y = {0.9, 0.9};
  base.ybar = {0, 0};
  spec.series = {line, dots, base};
  std::string one = cli::render_svg(spec);
  std::string two = cli::render_svg(spec);
  CHECK(one == two);
  CHECK(one.find("<polyline") != std::string::npos);
  CHECK(one.find("<circle") != std::string::npos);
  CHECK(one.find("stroke-dasharray") != std::string::npos);
  CHECK(one.find("demo") != std::string::npos);

  cli::PlotSpec empty;
  CHECK_THROWS(cli::render_svg(empty));
}
