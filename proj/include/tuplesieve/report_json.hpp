#ifndef TUPLESIEVE_REPORT_JSON_HPP
#define TUPLESIEVE_REPORT_JSON_HPP

#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include <tuplesieve/correlations.hpp>
#include <tuplesieve/f2.hpp>
#include <tuplesieve/gallagher.hpp>
#include <tuplesieve/singular.hpp>

// Hand-rolled JSON emission: reports print numbers with 12 significant
// digits, fields in a fixed order, so identical inputs give byte-identical
// output regardless of worker count.

namespace tuplesieve::json {

inline std::string num(double v) {
  if (std::isnan(v))
    return "null";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string num(std::uint64_t v) { return std::to_string(v); }
inline std::string num(long long v) { return std::to_string(v); }
inline std::string num(int v) { return std::to_string(v); }
inline std::string boolean(bool v) { return v ? "true" : "false"; }

inline std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\')
      out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

class Object {
public:
  Object& field(const std::string& key, const std::string& raw) {
    if (!body_.empty())
      body_ += ",";
    body_ += quote(key) + ":" + raw;
    return *this;
  }
  Object& field(const std::string& key, double v) { return field(key, num(v)); }
  Object& field(const std::string& key, std::uint64_t v) {
    return field(key, num(v));
  }
  Object& field(const std::string& key, long long v) {
    return field(key, num(v));
  }
  Object& field(const std::string& key, int v) { return field(key, num(v)); }
  Object& field_bool(const std::string& key, bool v) {
    return field(key, boolean(v));
  }
  Object& field_str(const std::string& key, const std::string& v) {
    return field(key, quote(v));
  }
  std::string str() const { return "{" + body_ + "}"; }

private:
  std::string body_;
};

inline std::string singular_report(const SingularValue& v) {
  return Object()
      .field_str("report", "singular")
      .field("value", v.value)
      .field("tail_bound", v.tail_bound)
      .field("cutoff", v.cutoff)
      .str();
}

inline std::string gallagher_report(const GallagherReport& r) {
  return Object()
      .field_str("report", "gallagher")
      .field("h", std::uint64_t(r.h))
      .field("exact_sum", r.exact_sum)
      .field("predicted", r.predicted)
      .field("ratio", r.ratio)
      .field("error_bound", r.error_bound)
      .field("tuple_count", r.tuple_count)
      .str();
}

inline std::string correlation_report(const CorrelationReport& r,
                                      const std::string& mode) {
  return Object()
      .field_str("report", "correlation")
      .field_str("mode", mode)
      .field("N", r.N)
      .field("empirical", r.empirical)
      .field("main_term", r.main_term)
      .field("main_term_uncertainty", r.main_term_uncertainty)
      .field("ratio", r.ratio)
      .str();
}

inline std::string bound_report(const BoundResult& r) {
  return Object()
      .field_str("report", "f2_bound")
      .field("lambda", r.lambda)
      .field("delta_prime", r.delta_prime)
      .field("bound", r.bound)
      .field_bool("valid", r.valid)
      .str();
}

inline std::string positivity_report(const PositivityReport& r,
                                     bool include_breakdown = false) {
  Object o;
  o.field_str("report", "f2_positivity")
      .field("lambda", r.params.lambda)
      .field("delta", r.params.delta)
      .field("k", r.params.k)
      .field("l", r.params.l)
      .field("theta", r.params.theta)
      .field("total_sign", r.total_sign)
      .field("log_magnitude", r.log_magnitude)
      .field("shifted_total", r.shifted_total)
      .field("r0", r.r0)
      .field("r_lo", r.r_lo)
      .field("r_hi", r.r_hi);
  if (include_breakdown) {
    std::string arr = "[";
    for (std::size_t i = 0; i < r.breakdown.size(); ++i) {
      if (i)
        arr += ",";
      arr += "[" + num(r.breakdown[i].r) + "," + num(r.breakdown[i].log_f) +
             "," + num(r.breakdown[i].p) + "]";
    }
    arr += "]";
    o.field("breakdown", arr);
  }
  return o.str();
}

inline std::string witness_report(const SearchResult& r) {
  Object o;
  o.field_str("report", "f2_witness")
      .field_bool("found", r.witness.has_value())
      .field_bool("futile_warning", r.futile_warning)
      .field("evaluated", r.evaluated);
  if (r.witness) {
    o.field("k", r.witness->k)
        .field("l", r.witness->l)
        .field("theta", r.witness->theta)
        .field("shifted_total", r.witness->shifted_total)
        .field("log_magnitude", r.witness->log_magnitude);
  }
  return o.str();
}

} // namespace tuplesieve::json

#endif
