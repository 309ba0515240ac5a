#include <vector>

#include "doctest.h"
#include "gpdqc/sample.h"
#include "test_util.h"

using namespace gpdqc;

TEST_CASE("extract_excesses examples") {
  const std::vector<double> x = {5, 1, 4, 2, 3};
  const auto s = extract_excesses(x, 2);
  CHECK(s.threshold == 3);
  CHECK(s.excesses == std::vector<double>{2, 1});
  CHECK(s.n == 5);
  CHECK(s.ties_at_threshold == 0);

  CHECK(extract_excesses(x, 4).threshold == 1);

  const std::vector<double> tied = {1, 2, 2, 2, 5};
  const auto t = extract_excesses(tied, 2);
  CHECK(t.threshold == 2);
  CHECK(t.excesses == std::vector<double>{3, 0});
  CHECK(t.ties_at_threshold == 1);
}

TEST_CASE("extract_excesses rejects k outside [1, n)") {
  const std::vector<double> x = {1, 2, 3};
  CHECK_ERROR(extract_excesses(x, 0), kValidation);
  CHECK_ERROR(extract_excesses(x, 3), kValidation);
}

TEST_CASE("excesses_over_threshold") {
  const std::vector<double> x = {1, 7, 3, 10, 4};
  const auto s = excesses_over_threshold(x, 3.5);
  CHECK(s.k() == 3);
  CHECK(s.n == 5);
  CHECK(s.excesses == std::vector<double>{6.5, 3.5, 0.5});
  CHECK_ERROR(excesses_over_threshold(x, 10), kValidation);
}

TEST_CASE("top order statistics view") {
  ExcessSample s;
  s.threshold = 10;
  s.excesses = {5, 1, 2};
  s.n = 20;
  CHECK(s.top_order_statistics() == std::vector<double>{10, 11, 12, 15});
}

TEST_CASE("validate") {
  ExcessSample s;
  s.n = 3;
  CHECK_ERROR(s.validate(), kValidation);
  s.excesses = {1, -0.5};
  CHECK_ERROR(s.validate(), kValidation);
  s.excesses = {1, 2, 3, 4};
  CHECK_ERROR(s.validate(), kValidation);
  s.excesses = {1, 0};
  s.validate();
  s.years = 0.0;
  CHECK_ERROR(s.validate(), kValidation);
}

TEST_CASE("exceedance ratio snaps p = k/n to one") {
  CHECK(exceedance_ratio(170, 17.0 / 170.0, 17) == 1.0);
  CHECK(exceedance_ratio(3, 1.0 / 3.0, 1) == 1.0);
  CHECK(exceedance_ratio(170, 0.01, 17) == doctest::Approx(0.1).epsilon(1e-15));
}
