#pragma once

#include <doctest.h>

// doctest's Approx defaults to a loose 1e-4 epsilon; always pick one explicitly.
inline doctest::Approx approx(double v, double rel = 1e-12) {
  return doctest::Approx(v).epsilon(rel);
}
