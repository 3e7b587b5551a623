#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace chvi::app {

/// Minimal ordered JSON value. Doubles print with 17 significant digits,
/// non-finite doubles as null; object keys keep insertion order.
class Json {
 public:
  using Array = std::vector<Json>;
  using Object = std::vector<std::pair<std::string, Json>>;

  Json() = default;  // null
  Json(std::nullptr_t) {}
  Json(bool b) : v_(b) {}
  Json(int n) : v_(static_cast<std::int64_t>(n)) {}
  Json(long n) : v_(static_cast<std::int64_t>(n)) {}
  Json(long long n) : v_(static_cast<std::int64_t>(n)) {}
  Json(unsigned long long n) : v_(static_cast<std::int64_t>(n)) {}
  Json(double d) : v_(d) {}
  Json(const char* s) : v_(std::string(s)) {}
  Json(std::string s) : v_(std::move(s)) {}
  Json(Array a) : v_(std::move(a)) {}
  Json(Object o) : v_(std::move(o)) {}

  static Json array() { return Json(Array{}); }
  static Json object() { return Json(Object{}); }

  /// Appends to an array.
  Json& push(Json v);
  /// Sets (or appends) a key of an object.
  Json& set(const std::string& key, Json v);

  std::string dump(int indent = 2) const;

 private:
  void write(std::string& out, int indent, int depth) const;

  std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Array, Object> v_{nullptr};
};

std::string format_double(double d);

}  // namespace chvi::app
