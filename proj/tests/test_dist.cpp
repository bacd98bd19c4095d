#include <catch2/catch_amalgamated.hpp>

#include "fauxpas/dist.hpp"

using fauxpas::Dist;

TEST_CASE("from_weights normalizes and sorts", "[dist]") {
  auto d = Dist<std::string>::from_weights({{"b", 3.0}, {"a", 1.0}});
  REQUIRE(d.size() == 2);
  CHECK(d.support()[0].first == "a");
  CHECK(d.support()[1].first == "b");
  CHECK(d.mass("a") == Catch::Approx(0.25).margin(1e-15));
  CHECK(d.mass("b") == Catch::Approx(0.75).margin(1e-15));
  CHECK(d.total_mass() == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("duplicate elements merge by summing", "[dist]") {
  auto d = Dist<int>::from_weights({{1, 1.0}, {2, 1.0}, {1, 2.0}});
  REQUIRE(d.size() == 2);
  CHECK(d.mass(1) == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("zero weights are dropped from the support", "[dist]") {
  auto d = Dist<int>::from_weights({{1, 0.0}, {2, 1.0}});
  REQUIRE(d.size() == 1);
  CHECK(d.mass(1) == 0.0);
  CHECK(d.mass(2) == 1.0);
}

TEST_CASE("negative weight is rejected", "[dist]") {
  CHECK_THROWS_AS(Dist<int>::from_weights({{1, -0.5}, {2, 1.5}}), fauxpas::SpecError);
}

TEST_CASE("all-zero weight is a zero posterior", "[dist]") {
  CHECK_THROWS_AS(Dist<int>::from_weights({{1, 0.0}}), fauxpas::ZeroPosteriorError);
  CHECK_THROWS_AS(Dist<int>::from_weights({}), fauxpas::ZeroPosteriorError);
}

TEST_CASE("point mass", "[dist]") {
  auto d = Dist<std::string>::point("x");
  REQUIRE(d.size() == 1);
  CHECK(d.mass("x") == 1.0);
  CHECK(d.mass("y") == 0.0);
}

TEST_CASE("construction order does not matter", "[dist]") {
  auto a = Dist<int>::from_weights({{3, 0.2}, {1, 0.5}, {2, 0.3}});
  auto b = Dist<int>::from_weights({{1, 5.0}, {2, 3.0}, {3, 2.0}});
  for (const auto& [x, m] : a.support()) {
    CHECK(b.mass(x) == Catch::Approx(m).margin(1e-15));
  }
}

TEST_CASE("map merges colliding images", "[dist]") {
  auto d = Dist<int>::from_weights({{1, 0.25}, {2, 0.25}, {3, 0.5}});
  auto even = d.map<std::string>([](const int& x) { return x % 2 ? "odd" : "even"; });
  CHECK(even.mass("odd") == Catch::Approx(0.75).margin(1e-15));
  CHECK(even.mass("even") == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("expectation", "[dist]") {
  auto d = Dist<int>::from_weights({{0, 0.5}, {10, 0.5}});
  CHECK(d.expectation([](const int& x) { return double(x); }) ==
        Catch::Approx(5.0).margin(1e-12));
}

TEST_CASE("default-constructed dist is empty until assigned", "[dist]") {
  Dist<int> d;
  CHECK(d.empty());
  CHECK(d.mass(1) == 0.0);
  d = Dist<int>::point(1);
  CHECK_FALSE(d.empty());
}
