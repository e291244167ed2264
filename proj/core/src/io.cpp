#include "modlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace modlab {

JsonValue& JsonValue::operator[](const std::string& key) {
  if (kind_ == Kind::null) kind_ = Kind::object;
  if (kind_ != Kind::object) throw std::logic_error("json: not an object");
  return obj_[key];
}

void JsonValue::push_back(JsonValue v) {
  if (kind_ == Kind::null) kind_ = Kind::array;
  if (kind_ != Kind::array) throw std::logic_error("json: not an array");
  arr_.push_back(std::move(v));
}

std::string JsonValue::format_double(double d) {
  if (std::isnan(d)) return "\"nan\"";
  if (std::isinf(d)) return d > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  // Ensure it parses back as a number, not an integer literal in disguise.
  if (!std::strpbrk(buf, ".eE")) std::strcat(buf, ".0");
  return buf;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void newline_indent(std::string& out, int indent, int depth) {
  if (indent <= 0) return;
  out += '\n';
  out.append(static_cast<std::size_t>(indent) * depth, ' ');
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::null: out += "null"; break;
    case Kind::boolean: out += bool_ ? "true" : "false"; break;
    case Kind::integer: out += std::to_string(int_); break;
    case Kind::number: out += format_double(num_); break;
    case Kind::string: write_escaped(out, str_); break;
    case Kind::array: {
      out += '[';
      for (std::size_t i = 0; i < arr_.size(); ++i) {
        if (i) out += ',';
        newline_indent(out, indent, depth + 1);
        arr_[i].write(out, indent, depth + 1);
      }
      if (!arr_.empty()) newline_indent(out, indent, depth);
      out += ']';
      break;
    }
    case Kind::object: {
      out += '{';
      std::size_t i = 0;
      for (const auto& [k, v] : obj_) {
        if (i++) out += ',';
        newline_indent(out, indent, depth + 1);
        write_escaped(out, k);
        out += indent > 0 ? ": " : ":";
        v.write(out, indent, depth + 1);
      }
      if (!obj_.empty()) newline_indent(out, indent, depth);
      out += '}';
      break;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  if (indent > 0) out += '\n';
  return out;
}

void write_text_file(const std::string& filename, const std::string& content) {
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + filename);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + filename);
}

std::string read_text_file(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + filename);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvWriter::CsvWriter(const std::string& filename,
                     const std::vector<std::string>& header)
    : buffer_(std::make_unique<std::string>()),
      filename_(filename),
      columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) *buffer_ += ',';
    *buffer_ += header[i];
  }
  *buffer_ += '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_)
    throw std::invalid_argument("csv: wrong column count");
  char buf[40];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) *buffer_ += ',';
    std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
    *buffer_ += buf;
  }
  *buffer_ += '\n';
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::invalid_argument("csv: wrong column count");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) *buffer_ += ',';
    *buffer_ += cells[i];
  }
  *buffer_ += '\n';
}

CsvWriter::~CsvWriter() {
  try {
    write_text_file(filename_, *buffer_);
  } catch (...) {
  }
}

void save_field_snapshot(const SpectralField& field, double t,
                         const std::string& filename) {
  JsonValue header = JsonValue::object();
  header["L"] = field.box_length;
  header["d"] = field.dim;
  header["n"] = field.n_modes;
  header["real"] = field.real_valued;
  header["t"] = t;
  std::string payload = header.dump(0);
  payload += '\n';

  std::vector<float> raw(2 * field.coef.size());
  for (std::size_t i = 0; i < field.coef.size(); ++i) {
    raw[2 * i] = static_cast<float>(field.coef[i].real());
    raw[2 * i + 1] = static_cast<float>(field.coef[i].imag());
  }
  std::ofstream out(filename, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write snapshot: " + filename);
  out << payload;
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw std::runtime_error("snapshot write failed: " + filename);
}

namespace {

double header_number(const std::string& line, const std::string& key) {
  const std::string tag = "\"" + key + "\":";
  auto pos = line.find(tag);
  if (pos == std::string::npos)
    throw std::runtime_error("snapshot header missing key: " + key);
  pos += tag.size();
  if (line.compare(pos, 4, "true") == 0) return 1;
  if (line.compare(pos, 5, "false") == 0) return 0;
  return std::stod(line.substr(pos));
}

}  // namespace

FieldSnapshot load_field_snapshot(const std::string& filename) {
  std::ifstream in(filename, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + filename);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty snapshot file");

  const int dim = static_cast<int>(header_number(line, "d"));
  const int n = static_cast<int>(header_number(line, "n"));
  const double L = header_number(line, "L");
  const bool real = header_number(line, "real") != 0;
  FieldSnapshot snap;
  snap.t = header_number(line, "t");
  snap.field = SpectralField::zero(dim, n, L, real);

  std::vector<float> raw(2 * snap.field.coef.size());
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!in) throw std::runtime_error("snapshot payload truncated: " + filename);
  for (std::size_t i = 0; i < snap.field.coef.size(); ++i)
    snap.field.coef[i] = {static_cast<double>(raw[2 * i]),
                          static_cast<double>(raw[2 * i + 1])};
  return snap;
}

void save_field_csv_1d(const SpectralField& field, const std::string& filename) {
  if (field.dim != 1)
    throw std::invalid_argument("field csv export is for 1d slices");
  const auto samples = to_physical(field);
  CsvWriter csv(filename, {"x", "re", "im", "abs"});
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const double x = field.box_length * static_cast<double>(j) /
                     static_cast<double>(field.n_modes);
    csv.row({x, samples[j].real(), samples[j].imag(), std::abs(samples[j])});
  }
}

}  // namespace modlab
