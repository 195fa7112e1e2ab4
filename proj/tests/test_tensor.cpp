#include <doctest.h>

#include "hnet/tensor.hpp"

using namespace hnet;

TEST_CASE("rng is deterministic and uniform stays in range") {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform(-2.0, 3.0);
    CHECK(x == b.uniform(-2.0, 3.0));
    CHECK(x >= -2.0);
    CHECK(x < 3.0);
  }
}

TEST_CASE("rng shuffle is a permutation and seed-stable") {
  std::vector<int> v1 = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<int> v2 = v1;
  Rng a(11);
  Rng b(11);
  a.shuffle(v1);
  b.shuffle(v2);
  CHECK(v1 == v2);
  std::sort(v1.begin(), v1.end());
  CHECK(v1 == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8});
}

TEST_CASE("tensor shapes and bit equality") {
  Tensor v = Tensor::zeros_vector(3);
  CHECK(v.rank() == 1);
  CHECK(v.rows() == 3);
  CHECK(v.cols() == 1);
  CHECK(v.dims() == std::vector<std::uint32_t>{3});

  Tensor m = Tensor::zeros_matrix(2, 4);
  CHECK(m.rank() == 2);
  CHECK(m.dims() == std::vector<std::uint32_t>{2, 4});
  CHECK_FALSE(v.same_shape(m));

  Tensor v2 = v;
  CHECK(v.bit_equal(v2));
  v2.mat()(1, 0) = 1e-300;
  CHECK_FALSE(v.bit_equal(v2));
}

TEST_CASE("param store rejects duplicates and unknown names") {
  ParamStore store;
  store.add("w", Tensor::zeros_vector(2));
  CHECK_THROWS_AS(store.add("w", Tensor::zeros_vector(2)), Error);
  CHECK_THROWS_AS(store.at("nope"), Error);
  CHECK(store.has("w"));
}

TEST_CASE("init_from copies by name and enforces strictness") {
  ParamStore target;
  target.add("a", Tensor::zeros_vector(2));
  target.add("b", Tensor::zeros_vector(3));

  ParamStore source;
  Rng rng(3);
  source.add("a", uniform_tensor_vector(2, rng, 0.5));

  SUBCASE("strict load reports the missing names") {
    try {
      target.init_from(source, true);
      FAIL("expected CheckpointError");
    } catch (const CheckpointError& e) {
      CHECK(e.code == CheckpointError::Code::missing_params);
      CHECK(std::string(e.what()).find("b") != std::string::npos);
    }
  }

  SUBCASE("lenient load keeps the initialized value") {
    target.init_from(source, false);
    CHECK(target.at("a").bit_equal(source.at("a")));
    CHECK(target.at("b").mat().isZero());
  }

  SUBCASE("shape conflicts are always an error") {
    ParamStore bad;
    bad.add("a", Tensor::zeros_vector(5));
    bad.add("b", Tensor::zeros_vector(3));
    CHECK_THROWS_AS(target.init_from(bad, false), CheckpointError);
  }
}

TEST_CASE("dropout mask: rate 0 gives all ones") {
  Rng rng(1);
  const Tensor mask = dropout_mask(32, 1, 0.0, rng);
  CHECK(mask.mat().isConstant(1.0));
}

TEST_CASE("dropout mask: zero fraction matches the rate within 3 sigma") {
  Rng rng(1234);
  const Tensor mask = dropout_mask(10000, 1, 0.5, rng);
  int zeros = 0;
  for (Index i = 0; i < mask.rows(); ++i) {
    const double x = mask.mat()(i, 0);
    CHECK((x == 0.0 || x == 2.0));  // inverted scaling: 1/(1-0.5)
    zeros += x == 0.0 ? 1 : 0;
  }
  const double fraction = zeros / 10000.0;
  CHECK(fraction > 0.5 - 0.015);
  CHECK(fraction < 0.5 + 0.015);
}

TEST_CASE("dropout mask: seed-stable, rate >= 1 rejected") {
  Rng a(9);
  Rng b(9);
  CHECK(dropout_mask(100, 1, 0.3, a).bit_equal(dropout_mask(100, 1, 0.3, b)));
  Rng c(9);
  CHECK_THROWS_AS(dropout_mask(4, 1, 1.0, c), Error);
  CHECK_THROWS_AS(dropout_mask(4, 1, -0.1, c), Error);
}
