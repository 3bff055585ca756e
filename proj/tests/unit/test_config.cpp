#include <doctest.h>

#include <cmath>
#include <functional>

#include "polardyn/config.hpp"
#include "polardyn/error.hpp"
#include "polardyn/rng.hpp"

using namespace polardyn;

namespace {

ErrorCategory category_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.category();
  }
  FAIL("expected an error");
  return ErrorCategory::Usage;
}

}  // namespace

TEST_CASE("parse key = value documents") {
  const auto c = KeyValueConfig::parse(
      "# comment\n\nalpha = 3.75\n  beta=0.25  \nA = 1,2; 3,4\nflag = true\nname = a b\n");
  CHECK(c.get_double("alpha") == 3.75);
  CHECK(c.get_double("beta") == 0.25);
  CHECK(c.get("name") == "a b");
  CHECK(c.get_bool("flag"));
  const auto m = c.get_matrix("A");
  REQUIRE(m.size() == 2);
  CHECK(m[1] == std::vector<double>{3, 4});
  CHECK(c.entries().size() == 5);
}

TEST_CASE("parse errors name the line") {
  try {
    KeyValueConfig::parse("a = 1\nnot an assignment\n", "x.cfg");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Parse);
    CHECK(std::string(e.what()).find("x.cfg:2") != std::string::npos);
  }
  CHECK(category_of([] { KeyValueConfig::parse("a = 1\na = 2\n"); }) == ErrorCategory::Parse);
  CHECK(category_of([] { KeyValueConfig::parse("b@d = 1\n"); }) == ErrorCategory::Parse);
}

TEST_CASE("typed getters") {
  KeyValueConfig c;
  c.set_assignment("n=12");
  c.set_assignment("x = -0.5");
  c.set_assignment("list = 1, 2.5,3");
  c.set_assignment("ragged = 1,2;3");
  c.set_assignment("word = abc");
  CHECK(c.get_int("n") == 12);
  CHECK(c.get_uint("n") == 12);
  CHECK(c.get_doubles("list") == std::vector<double>{1, 2.5, 3});
  CHECK(c.get_strings("list")[1] == "2.5");
  CHECK(category_of([&] { c.get_uint("x"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.get_double("word"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.get_int("x"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.get_bool("word"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.get_matrix("ragged"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.get("missing"); }) == ErrorCategory::Config);
  CHECK(category_of([&] { c.set_assignment("novalue"); }) == ErrorCategory::Usage);
}

TEST_CASE("schema resolution") {
  const ConfigSchema schema = {{"alpha", "", "required"}, {"eps", "0.01", ""}};
  KeyValueConfig user;
  user.set("alpha", "2");
  const auto r = resolve(schema, user);
  CHECK(r.get("eps") == "0.01");
  CHECK(r.get("alpha") == "2");
  user.set("alpah", "1");
  try {
    resolve(schema, user);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.category() == ErrorCategory::Config);
    CHECK(std::string(e.what()).find("alpah") != std::string::npos);
  }
}

TEST_CASE("canonical text round-trips and hashes") {
  const auto c = KeyValueConfig::parse("b = 2\na = x,y\n");
  CHECK(c.to_string() == "a = x,y\nb = 2\n");
  const auto back = KeyValueConfig::parse(c.to_string());
  CHECK(back.entries() == c.entries());
  CHECK(config_hash(back) == config_hash(c));
  auto d = c;
  d.set("b", "3");
  CHECK(config_hash(d) != config_hash(c));
  // FNV-1a offset basis for empty input.
  CHECK(config_hash(KeyValueConfig{}) == 0xcbf29ce484222325ULL);
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(3.75) == "3.75");
  CHECK(format_double(100) == "100");
  CHECK(format_double(NAN) == "nan");
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(rng.uniform(-1, 1), static_cast<int>(rng.below(200)) - 100);
    CHECK(parse_double(format_double(x), "x") == x);
  }
}

TEST_CASE("numeric parsing") {
  CHECK(parse_double(" 2.5 ", "v") == 2.5);
  CHECK(parse_double("+1e-3", "v") == 1e-3);
  CHECK(parse_int("-7", "v") == -7);
  CHECK(category_of([] { parse_double("1.5x", "v"); }) == ErrorCategory::Parse);
  CHECK(category_of([] { parse_double("", "v"); }) == ErrorCategory::Parse);
  CHECK(category_of([] { parse_int("1.0", "v"); }) == ErrorCategory::Parse);
  CHECK(split("a, b,,c", ',') == std::vector<std::string>{"a", "b", "", "c"});
  CHECK(trim("  x \t") == "x");
}
