#pragma once

#include <doctest.h>

#include <Eigen/Dense>

#include "minharm/geometry.hpp"

namespace minharm::test {

inline Vec v1(double x) {
  Vec v(1);
  v << x;
  return v;
}

inline Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

inline Vec v3(double x, double y, double z) {
  Vec v(3);
  v << x, y, z;
  return v;
}

}  // namespace minharm::test
