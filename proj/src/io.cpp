#include "streamcpd/io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace streamcpd {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

bool parse_double(const std::string& text, double& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && !text.empty();
}

class CsvReader final : public RowReader {
 public:
  CsvReader(std::istream& in, const ReaderOptions& options) : in_(in) {
    std::string header;
    if (!std::getline(in_, header)) throw ConfigError("csv input is missing a header row");
    const auto names = split_csv_line(header);

    if (!options.key_column.empty()) {
      const auto it = std::find(names.begin(), names.end(), options.key_column);
      if (it == names.end()) throw ConfigError("key column not found: " + options.key_column);
      key_index_ = static_cast<std::ptrdiff_t>(it - names.begin());
    }

    if (options.value_columns.empty()) {
      for (std::size_t i = 0; i < names.size(); ++i)
        if (static_cast<std::ptrdiff_t>(i) != key_index_) value_indices_.push_back(i);
    } else {
      for (const auto& wanted : options.value_columns) {
        const auto it = std::find(names.begin(), names.end(), wanted);
        if (it == names.end()) throw ConfigError("value column not found: " + wanted);
        value_indices_.push_back(static_cast<std::size_t>(it - names.begin()));
      }
    }
    if (value_indices_.empty()) throw ConfigError("csv input has no value columns");
  }

  bool next(Row& row) override {
    std::string line;
    while (std::getline(in_, line)) {
      if (line.empty()) continue;
      const auto fields = split_csv_line(line);
      row.values.clear();
      bool ok = true;
      for (auto idx : value_indices_) {
        double v = 0.0;
        if (idx >= fields.size() || !parse_double(fields[idx], v)) {
          ok = false;
          break;
        }
        row.values.push_back(v);
      }
      if (key_index_ >= 0) {
        if (static_cast<std::size_t>(key_index_) >= fields.size()) ok = false;
        else row.key = fields[static_cast<std::size_t>(key_index_)];
      } else {
        row.key.clear();
      }
      if (!ok) {
        ++malformed_;
        continue;
      }
      return true;
    }
    return false;
  }

 private:
  std::istream& in_;
  std::ptrdiff_t key_index_ = -1;
  std::vector<std::size_t> value_indices_;
};

class NdjsonReader final : public RowReader {
 public:
  NdjsonReader(std::istream& in, const ReaderOptions& options) : in_(in), options_(options) {}

  bool next(Row& row) override {
    std::string line;
    while (std::getline(in_, line)) {
      if (trim(line).empty()) continue;
      const auto record = nlohmann::json::parse(line, nullptr, false);
      if (record.is_discarded() || !record.is_object()) {
        ++malformed_;
        continue;
      }
      if (!extract(record, row)) {
        ++malformed_;
        continue;
      }
      return true;
    }
    return false;
  }

 private:
  bool extract(const nlohmann::json& record, Row& row) {
    row.values.clear();
    row.key.clear();
    if (!options_.key_column.empty()) {
      if (!record.contains(options_.key_column)) return false;
      const auto& k = record.at(options_.key_column);
      if (k.is_string()) row.key = k.get<std::string>();
      else if (k.is_number()) row.key = k.dump();
      else return false;
    }
    if (!options_.value_columns.empty()) {
      for (const auto& name : options_.value_columns) {
        if (!record.contains(name) || !record.at(name).is_number()) return false;
        row.values.push_back(record.at(name).get<double>());
      }
      return true;
    }
    if (!record.contains("value")) return false;
    const auto& value = record.at("value");
    if (value.is_number()) {
      row.values.push_back(value.get<double>());
      return true;
    }
    if (value.is_array() && !value.empty()) {
      for (const auto& v : value) {
        if (!v.is_number()) return false;
        row.values.push_back(v.get<double>());
      }
      return true;
    }
    return false;
  }

  std::istream& in_;
  ReaderOptions options_;
};

}  // namespace

std::unique_ptr<RowReader> make_csv_reader(std::istream& in, const ReaderOptions& options) {
  return std::make_unique<CsvReader>(in, options);
}

std::unique_ptr<RowReader> make_ndjson_reader(std::istream& in, const ReaderOptions& options) {
  return std::make_unique<NdjsonReader>(in, options);
}

void write_stream_csv(const StreamWithTruth& stream, std::ostream& out) {
  for (std::size_t c = 0; c < stream.dim; ++c) {
    if (c) out << ',';
    out << 'x' << c;
  }
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const auto row = stream.row(i);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << row[c];
    }
    out << '\n';
  }
}

void write_truth(const std::vector<std::uint64_t>& truth, std::ostream& out) {
  for (auto idx : truth) out << idx << '\n';
}

std::vector<std::uint64_t> read_truth(std::istream& in) {
  std::vector<std::uint64_t> truth;
  std::string line;
  while (std::getline(in, line)) {
    const auto text = trim(line);
    if (text.empty()) continue;
    truth.push_back(std::stoull(text));
  }
  return truth;
}

}  // namespace streamcpd
