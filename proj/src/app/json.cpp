#include "chvi/app/json.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace chvi::app {
namespace {

void escape(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void newline(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent * depth), ' ');
}

}  // namespace

std::string format_double(double d) {
  if (!std::isfinite(d)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  std::string s(buf);
  // Keep it a JSON number that reads back as floating point.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

Json& Json::push(Json v) {
  auto* a = std::get_if<Array>(&v_);
  if (!a) throw std::logic_error("Json::push on non-array");
  a->push_back(std::move(v));
  return a->back();
}

Json& Json::set(const std::string& key, Json v) {
  auto* o = std::get_if<Object>(&v_);
  if (!o) throw std::logic_error("Json::set on non-object");
  for (auto& [k, existing] : *o) {
    if (k == key) {
      existing = std::move(v);
      return existing;
    }
  }
  o->emplace_back(key, std::move(v));
  return o->back().second;
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

void Json::write(std::string& out, int indent, int depth) const {
  if (std::holds_alternative<std::nullptr_t>(v_)) {
    out += "null";
  } else if (const bool* b = std::get_if<bool>(&v_)) {
    out += *b ? "true" : "false";
  } else if (const auto* n = std::get_if<std::int64_t>(&v_)) {
    out += std::to_string(*n);
  } else if (const double* d = std::get_if<double>(&v_)) {
    out += format_double(*d);
  } else if (const auto* s = std::get_if<std::string>(&v_)) {
    escape(out, *s);
  } else if (const auto* a = std::get_if<Array>(&v_)) {
    if (a->empty()) {
      out += "[]";
      return;
    }
    out += '[';
    for (std::size_t i = 0; i < a->size(); ++i) {
      if (i) out += ',';
      newline(out, indent, depth + 1);
      (*a)[i].write(out, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += ']';
  } else if (const auto* o = std::get_if<Object>(&v_)) {
    if (o->empty()) {
      out += "{}";
      return;
    }
    out += '{';
    for (std::size_t i = 0; i < o->size(); ++i) {
      if (i) out += ',';
      newline(out, indent, depth + 1);
      escape(out, (*o)[i].first);
      out += indent > 0 ? ": " : ":";
      (*o)[i].second.write(out, indent, depth + 1);
    }
    newline(out, indent, depth);
    out += '}';
  }
}

}  // namespace chvi::app
