#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "dnaood/csv.hpp"
#include "dnaood/errors.hpp"
#include "dnaood/logit_table.hpp"
#include "doctest.h"

using namespace dnaood;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("dnaood_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  static std::size_t counter() {
    static std::size_t n = 0;
    return n++;
  }
  std::string file(const std::string& name, const std::string& content) const {
    const std::string p = (path / name).string();
    write_file(p, content);
    return p;
  }
};

const std::string kClassMap = "index,taxon_id\n0,alpha\n1,beta\n";

}  // namespace

TEST_CASE("load_logit_table reads a well-formed table") {
  TempDir dir;
  const std::string classes = dir.file("classes.csv", kClassMap);
  const std::string logits = dir.file("logits.csv",
                                      "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                      "img0,sp0,alpha,1.5,-0.25\n"
                                      "img1,sp0,gamma,0.5,2\n");
  const LogitTable table = load_logit_table(logits, classes);
  REQUIRE(table.n_classes() == 2);
  CHECK(table.class_names[0] == "alpha");
  CHECK(table.class_names[1] == "beta");
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].logits[0] == 1.5);
  CHECK(table.rows[1].true_class == "gamma");  // outlier rows may name unseen taxa
}

TEST_CASE("class map order fixes logit column order") {
  TempDir dir;
  const std::string classes = dir.file("classes.csv", "index,taxon_id\n1,beta\n0,alpha\n");
  const std::string logits = dir.file("logits.csv",
                                      "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                      "img0,sp0,alpha,1,2\n");
  const LogitTable table = load_logit_table(logits, classes);
  CHECK(table.class_names == std::vector<std::string>{"alpha", "beta"});
}

TEST_CASE("load_logit_table errors name the problem") {
  TempDir dir;
  const std::string classes = dir.file("classes.csv", kClassMap);

  SUBCASE("malformed header") {
    const std::string logits =
        dir.file("logits.csv", "image,specimen_id,true_class,logit_0,logit_1\nimg0,sp0,alpha,1,2\n");
    CHECK_THROWS_WITH_AS(load_logit_table(logits, classes), doctest::Contains("header"),
                         ValidationError);
  }
  SUBCASE("row arity mismatch") {
    const std::string logits = dir.file("logits.csv",
                                        "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                        "img0,sp0,alpha,1,2,3\n");
    CHECK_THROWS_WITH_AS(load_logit_table(logits, classes), doctest::Contains("line 2"),
                         ValidationError);
  }
  SUBCASE("non-numeric logit") {
    const std::string logits = dir.file("logits.csv",
                                        "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                        "img0,sp0,alpha,1,zap\n");
    CHECK_THROWS_WITH_AS(load_logit_table(logits, classes), doctest::Contains("zap"),
                         ValidationError);
  }
  SUBCASE("non-finite logit") {
    const std::string logits = dir.file("logits.csv",
                                        "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                        "img0,sp0,alpha,1,inf\n");
    CHECK_THROWS_AS(load_logit_table(logits, classes), ValidationError);
  }
  SUBCASE("duplicate image id") {
    const std::string logits = dir.file("logits.csv",
                                        "image_id,specimen_id,true_class,logit_0,logit_1\n"
                                        "img0,sp0,alpha,1,2\nimg0,sp1,beta,3,4\n");
    CHECK_THROWS_WITH_AS(load_logit_table(logits, classes), doctest::Contains("'img0'"),
                         ValidationError);
  }
  SUBCASE("empty table") {
    const std::string logits =
        dir.file("logits.csv", "image_id,specimen_id,true_class,logit_0,logit_1\n");
    CHECK_THROWS_AS(load_logit_table(logits, classes), ValidationError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_logit_table((dir.path / "nope.csv").string(), classes), ValidationError);
  }
}

TEST_CASE("class map errors") {
  TempDir dir;
  SUBCASE("index gap") {
    const std::string classes = dir.file("classes.csv", "index,taxon_id\n0,alpha\n2,beta\n");
    CHECK_THROWS_WITH_AS(load_class_map(classes), doctest::Contains("gap or duplicate"),
                         ValidationError);
  }
  SUBCASE("duplicate index") {
    const std::string classes =
        dir.file("classes.csv", "index,taxon_id\n0,alpha\n0,beta\n1,gamma\n");
    CHECK_THROWS_AS(load_class_map(classes), ValidationError);
  }
  SUBCASE("duplicate taxon") {
    const std::string classes = dir.file("classes.csv", "index,taxon_id\n0,alpha\n1,alpha\n");
    CHECK_THROWS_AS(load_class_map(classes), ValidationError);
  }
  SUBCASE("single class") {
    const std::string classes = dir.file("classes.csv", "index,taxon_id\n0,alpha\n");
    CHECK_THROWS_WITH_AS(load_class_map(classes), doctest::Contains("at least 2"),
                         ValidationError);
  }
  SUBCASE("bad header") {
    const std::string classes = dir.file("classes.csv", "idx,taxon\n0,alpha\n1,beta\n");
    CHECK_THROWS_AS(load_class_map(classes), ValidationError);
  }
}

TEST_CASE("logit table round-trips through CSV") {
  TempDir dir;
  LogitTable table;
  table.class_names = {"alpha", "beta", "gamma"};
  table.rows.push_back({"img0", "sp0", "alpha", {0.125, -3.5, 1e-9}});
  table.rows.push_back({"img1", "sp1", "delta", {2.0, 0.3333333333333333, -7.25}});

  const std::string logits = dir.file("logits.csv", to_csv(table));
  const std::string classes = dir.file("classes.csv", class_map_to_csv(table.class_names));
  const LogitTable back = load_logit_table(logits, classes);
  REQUIRE(back.rows.size() == table.rows.size());
  CHECK(back.class_names == table.class_names);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    CHECK(back.rows[i].image_id == table.rows[i].image_id);
    CHECK(back.rows[i].logits == table.rows[i].logits);  // format_double round-trips exactly
  }
}

TEST_CASE("format_double round-trips and spells infinity as inf") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  double v = 0.0;
  CHECK(parse_double("-1.25e-3", v));
  CHECK(v == -1.25e-3);
  CHECK_FALSE(parse_double("1.5x", v));
  CHECK_FALSE(parse_double("", v));
}
