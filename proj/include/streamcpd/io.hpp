#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "streamcpd/common.hpp"
#include "streamcpd/datagen.hpp"

namespace streamcpd {

struct Row {
  std::string key;  // empty when the input is unkeyed
  std::vector<double> values;
};

struct ReaderOptions {
  std::string key_column;                   // empty: unkeyed input
  std::vector<std::string> value_columns;   // empty: every non-key column / the "value" field
};

/// Pulls one observation per call. Malformed rows are skipped and counted,
/// never fatal. A named key or value column that does not exist is a
/// configuration error, raised up front.
class RowReader {
 public:
  virtual ~RowReader() = default;
  virtual bool next(Row& row) = 0;
  std::uint64_t malformed() const { return malformed_; }

 protected:
  std::uint64_t malformed_ = 0;
};

/// CSV with a header row. Unquoted fields, comma separated.
std::unique_ptr<RowReader> make_csv_reader(std::istream& in, const ReaderOptions& options);

/// One JSON object per line. Values come from the configured columns, or from
/// a "value" field holding a number or an array of numbers.
std::unique_ptr<RowReader> make_ndjson_reader(std::istream& in, const ReaderOptions& options);

void write_stream_csv(const StreamWithTruth& stream, std::ostream& out);
void write_truth(const std::vector<std::uint64_t>& truth, std::ostream& out);
std::vector<std::uint64_t> read_truth(std::istream& in);

}  // namespace streamcpd
