#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "modlab/spectral.hpp"

namespace modlab {

// Minimal JSON value with deterministic serialization: object keys sorted,
// floats printed with %.17g, no locale dependence. Reports serialized twice
// from the same inputs are byte-identical.
class JsonValue {
 public:
  JsonValue() : kind_(Kind::null) {}
  JsonValue(bool b) : kind_(Kind::boolean), bool_(b) {}
  JsonValue(double d) : kind_(Kind::number), num_(d) {}
  JsonValue(int v) : kind_(Kind::integer), int_(v) {}
  JsonValue(long long v) : kind_(Kind::integer), int_(v) {}
  JsonValue(std::uint64_t v) : kind_(Kind::integer), int_(static_cast<long long>(v)) {}
  JsonValue(const char* s) : kind_(Kind::string), str_(s) {}
  JsonValue(std::string s) : kind_(Kind::string), str_(std::move(s)) {}

  static JsonValue object() { JsonValue v; v.kind_ = Kind::object; return v; }
  static JsonValue array() { JsonValue v; v.kind_ = Kind::array; return v; }

  JsonValue& operator[](const std::string& key);
  void push_back(JsonValue v);

  bool is_object() const { return kind_ == Kind::object; }
  std::string dump(int indent = 0) const;

  static std::string format_double(double d);

 private:
  enum class Kind { null, boolean, integer, number, string, array, object };
  void write(std::string& out, int indent, int depth) const;

  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double num_ = 0;
  std::string str_;
  std::vector<JsonValue> arr_;
  std::map<std::string, JsonValue> obj_;  // sorted keys
};

void write_text_file(const std::string& filename, const std::string& content);
std::string read_text_file(const std::string& filename);

// CSV with a fixed header; numbers via %.17g.
class CsvWriter {
 public:
  CsvWriter(const std::string& filename, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);
  std::size_t columns() const { return columns_; }

 private:
  std::unique_ptr<std::string> buffer_;
  std::string filename_;
  std::size_t columns_;

 public:
  ~CsvWriter();
};

// Field snapshot: one JSON header line {"L":..,"d":..,"n":..,"real":..,"t":..}
// followed by the raw little-endian complex64 (float32 re,im) payload.
void save_field_snapshot(const SpectralField& field, double t,
                         const std::string& filename);
struct FieldSnapshot {
  SpectralField field;
  double t = 0;
};
FieldSnapshot load_field_snapshot(const std::string& filename);

void save_field_csv_1d(const SpectralField& field, const std::string& filename);

}  // namespace modlab
