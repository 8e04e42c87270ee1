#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "fewfermi/table.hpp"

#include <cmath>

namespace tab = fewfermi::table;

namespace {

tab::Table sample() {
  tab::Table t;
  t.columns = {"q", "label", "energy", "extra"};
  t.add_row({tab::Cell::num(-1.0), tab::Cell::str("level0"),
             tab::Cell::num(0.810162760228314), tab::Cell::none()});
  t.add_row({tab::Cell::num(0.125), tab::Cell::str("level1"),
             tab::Cell::num(1.0 / 3.0), tab::Cell::num(2.0)});
  return t;
}

}  // namespace

TEST_CASE("csv format") {
  const std::string csv = tab::to_csv(sample());
  CHECK(csv ==
        "q,label,energy,extra\n"
        "-1,level0,0.810162760228,\n"
        "0.125,level1,0.333333333333,2\n");
}

TEST_CASE("json round trip is bit identical") {
  const tab::Table t = sample();
  const std::string json = tab::to_json(t);
  const tab::Table back = tab::from_json(json);
  CHECK(back == t);
  // And the re-serialisation is byte identical.
  CHECK(tab::to_json(back) == json);
}

TEST_CASE("row width is enforced") {
  tab::Table t;
  t.columns = {"a", "b"};
  CHECK_THROWS_AS(t.add_row({tab::Cell::num(1.0)}), std::invalid_argument);
}
