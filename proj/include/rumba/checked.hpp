#pragma once

#include <cstdint>
#include <string_view>

#include "rumba/error.hpp"

namespace rumba::checked {

// Overflow-checked int64 arithmetic. `op` names the calling operation in the
// error message so a failure deep inside elimination is still attributable.

inline std::int64_t add(std::int64_t a, std::int64_t b, std::string_view op = "add") {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("integer overflow in " + std::string(op));
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b, std::string_view op = "sub") {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r))
    throw OverflowError("integer overflow in " + std::string(op));
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b, std::string_view op = "mul") {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("integer overflow in " + std::string(op));
  return r;
}

// a + b * c
inline std::int64_t fma(std::int64_t a, std::int64_t b, std::int64_t c,
                        std::string_view op = "fma") {
  return add(a, mul(b, c, op), op);
}

inline std::int64_t neg(std::int64_t a, std::string_view op = "neg") {
  return sub(0, a, op);
}

}  // namespace rumba::checked
