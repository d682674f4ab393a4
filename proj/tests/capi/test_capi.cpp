#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "gilbert/gilbert.h"

#include <doctest.h>

#include <cmath>
#include <string>

namespace {

struct Owned {
  char* p = nullptr;
  ~Owned() { gilbert_string_free(p); }
};

gilbert_config* demo3() {
  gilbert_config* c = nullptr;
  REQUIRE(gilbert_config_new(&c) == GILBERT_OK);
  REQUIRE(gilbert_config_add(c, 0, 0, 0) == GILBERT_OK);
  REQUIRE(gilbert_config_add(c, 1, 2, M_PI / 2) == GILBERT_OK);
  REQUIRE(gilbert_config_add(c, -1, 5, M_PI / 2) == GILBERT_OK);
  return c;
}

}  // namespace

TEST_CASE("build through the C interface") {
  gilbert_config* c = demo3();
  gilbert_tessellation* t = nullptr;
  REQUIRE(gilbert_build(c, 0, &t) == GILBERT_OK);
  CHECK(gilbert_tessellation_seed_count(t) == 3);
  double len = 0;
  CHECK(gilbert_branch_length(t, 2, -1, &len) == GILBERT_OK);
  CHECK(len == doctest::Approx(5.0));
  CHECK(gilbert_branch_length(t, 0, 1, &len) == GILBERT_OK);
  CHECK(std::isinf(len));
  CHECK(gilbert_branch_length(t, 9, 1, &len) == GILBERT_ERR_LOOKUP);
  CHECK(gilbert_branch_length(t, 0, 0, &len) == GILBERT_ERR_DOMAIN);
  CHECK(std::string(gilbert_last_error()).find("sign") != std::string::npos);

  double x = 0, y = 0;
  CHECK(gilbert_branch_tip(t, 1, -1, 10.0, &x, &y) == GILBERT_OK);
  CHECK(x == doctest::Approx(1.0));
  CHECK(y == doctest::Approx(0.0));

  REQUIRE(gilbert_event_count(t) == 2);
  gilbert_event e;
  CHECK(gilbert_event_at(t, 0, &e) == GILBERT_OK);
  CHECK(e.blocked_seed == 1);
  CHECK(e.blocked_sign == -1);
  CHECK(gilbert_event_at(t, 5, &e) == GILBERT_ERR_LOOKUP);

  Owned svg, json;
  CHECK(gilbert_tessellation_svg(t, 0, 0, 0, 0, &svg.p) == GILBERT_OK);
  CHECK(std::string(svg.p).find("<svg") == 0);
  CHECK(gilbert_tessellation_json(t, &json.p) == GILBERT_OK);
  CHECK(std::string(json.p).find("\"xi_minus\": 5.0") != std::string::npos);
  gilbert_tessellation_free(t);
  gilbert_config_free(c);
}

TEST_CASE("status codes for bad input") {
  gilbert_config* c = nullptr;
  REQUIRE(gilbert_config_new(&c) == GILBERT_OK);
  CHECK(gilbert_config_add(c, 0, 0, 3.5) == GILBERT_ERR_DOMAIN);
  CHECK(gilbert_config_add(c, 0, 0, 0.1) == GILBERT_OK);
  CHECK(gilbert_config_add(c, 0, 0, 0.2) == GILBERT_OK);
  gilbert_tessellation* t = nullptr;
  CHECK(gilbert_build(c, 0, &t) == GILBERT_ERR_DEGENERATE);
  CHECK(t == nullptr);
  CHECK(gilbert_build(nullptr, 0, &t) == GILBERT_ERR_NULL);
  CHECK(gilbert_config_set_window(c, 0, 0, -1, 1) == GILBERT_ERR_DOMAIN);
  gilbert_config_free(c);

  gilbert_config* parsed = nullptr;
  CHECK(gilbert_config_from_json("[{\"x\": 1}]", &parsed) == GILBERT_ERR_DOMAIN);
  CHECK(gilbert_config_from_json("not json", &parsed) == GILBERT_ERR_IO);
  CHECK(std::string(gilbert_status_name(GILBERT_ERR_HARNESS)) == "harness error");
  gilbert_estimate est;
  CHECK(gilbert_estimate_e({1.0, 1, 0}, "nonsense", 50, 64, &est) == GILBERT_ERR_DOMAIN);
  CHECK(gilbert_estimate_e({1.0, 1, 0}, "total-length", 5, 64, &est) == GILBERT_ERR_DOMAIN);
}

TEST_CASE("sampling, estimators and tables") {
  gilbert_config* c = nullptr;
  REQUIRE(gilbert_config_sample(0, 0, 5, 5, {1.0, 3, 0}, &c) == GILBERT_OK);
  CHECK(gilbert_config_size(c) > 0);
  double x, y, a;
  uint64_t id;
  CHECK(gilbert_config_seed(c, 0, &x, &y, &a, &id) == GILBERT_OK);
  CHECK(id == 0);
  gilbert_config_free(c);

  gilbert_xi xi;
  CHECK(gilbert_whole_plane_xi(0, 0, {1.0, 4, 0}, 64, &xi) == GILBERT_OK);
  CHECK(xi.certified == 1);
  CHECK(xi.radius <= xi.rho_hat);

  gilbert_estimate e1, e2;
  CHECK(gilbert_estimate_e({1.0, 4, 0}, "threshold:0+", 40, 64, &e1) == GILBERT_OK);
  CHECK(e1.estimate == 1.0);
  CHECK(gilbert_estimate_e({1.0, 4, 0}, "total-length", 40, 64, &e1) == GILBERT_OK);
  CHECK(gilbert_estimate_e({1.0, 4, 0}, "total-length", 40, 64, &e2) == GILBERT_OK);
  CHECK(e1.estimate == e2.estimate);

  const double lambdas[] = {25.0, 100.0};
  gilbert_table* table = nullptr;
  REQUIRE(gilbert_lln({1.0, 4, 0}, "threshold:0+", "const1", lambdas, 2, 10, 3.0, 1.0, &table) == GILBERT_OK);
  CHECK(gilbert_table_size(table) == 2);
  gilbert_table_row row;
  CHECK(gilbert_table_row_at(table, 1, &row) == GILBERT_OK);
  CHECK(row.lambda == 100.0);
  CHECK(row.master_seed == 4);
  Owned csv;
  CHECK(gilbert_table_csv(table, &csv.p) == GILBERT_OK);
  gilbert_table* back = nullptr;
  CHECK(gilbert_table_from_csv(csv.p, &back) == GILBERT_OK);
  Owned csv2;
  CHECK(gilbert_table_csv(back, &csv2.p) == GILBERT_OK);
  CHECK(std::string(csv.p) == std::string(csv2.p));
  gilbert_table_free(back);
  gilbert_table_free(table);

  gilbert_measure_info info;
  CHECK(gilbert_measure({1.0, 4, 0}, "threshold:0+", "const1", 100.0, 3.0, &info) == GILBERT_OK);
  CHECK(info.value == static_cast<double>(info.atoms));

  double stat = 0, p = 0;
  const double z[] = {-1.5, -1.0, -0.5, -0.2, 0.0, 0.3, 0.7, 1.1, 1.6};
  CHECK(gilbert_ks_normal(z, 9, &stat, &p) == GILBERT_OK);
  CHECK(p > 0.1);
}
