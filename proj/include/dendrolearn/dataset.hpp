#pragma once

// Categorical tabular data: schemas, value dictionaries, and the occurrence
// counts every learner and scorer consumes.
//
// Conventions used throughout the library:
//   - Attributes are numbered 1..R. Index 0 is reserved to mean "no parent"
//     in structure types.
//   - Value codes are 0-based: attribute j takes codes 0..card(j)-1.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dendrolearn {

using ValueCode = std::int32_t;

struct AttributeSchema {
  std::vector<std::string> names;
  std::vector<int> cards;

  int size() const { return static_cast<int>(names.size()); }

  // Throws SchemaError unless names are unique and non-empty, the two lists
  // have equal nonzero length, and every cardinality is >= 1.
  void validate() const;

  bool operator==(const AttributeSchema&) const = default;
};

// Immutable after construction; safe for concurrent reads.
class Dataset {
 public:
  // `row_major` holds n*R codes; `value_names` maps code -> raw string per
  // attribute and must have exactly card(j) distinct entries for attribute j.
  Dataset(AttributeSchema schema, std::vector<ValueCode> row_major,
          std::vector<std::vector<std::string>> value_names);

  // Convenience for programmatic construction: dictionaries become the
  // decimal strings "0".."card-1".
  static Dataset from_codes(AttributeSchema schema,
                            const std::vector<std::vector<ValueCode>>& rows);

  const AttributeSchema& schema() const { return schema_; }
  int attribute_count() const { return schema_.size(); }
  std::int64_t row_count() const { return static_cast<std::int64_t>(data_.size()) / schema_.size(); }

  int card(int attr) const { return schema_.cards[attr - 1]; }
  const std::string& name(int attr) const { return schema_.names[attr - 1]; }

  ValueCode value(std::int64_t row, int attr) const {
    return data_[row * schema_.size() + (attr - 1)];
  }
  std::span<const ValueCode> row(std::int64_t r) const {
    return {data_.data() + r * schema_.size(), static_cast<std::size_t>(schema_.size())};
  }

  const std::string& raw_value(int attr, ValueCode code) const {
    return value_names_[attr - 1][code];
  }
  std::optional<ValueCode> code_of(int attr, std::string_view raw) const;
  const std::vector<std::vector<std::string>>& value_names() const { return value_names_; }

 private:
  AttributeSchema schema_;
  std::vector<ValueCode> data_;  // n x R, row-major
  std::vector<std::vector<std::string>> value_names_;
  std::vector<std::unordered_map<std::string, ValueCode>> value_codes_;
};

// Co-occurrence counts for an attribute pair; entries sum to n.
struct PairCounts {
  int i = 0;
  int j = 0;
  std::int64_t n = 0;
  std::vector<std::vector<std::int64_t>> table;  // card(i) x card(j)
};

// Occurrence counts for a child attribute under a parent-state decomposition:
// counts[s][q] is the number of rows with parent state s and child value q.
struct CondCountTable {
  int child = 0;
  int child_card = 0;
  std::int64_t n = 0;
  std::int64_t states = 0;
  std::vector<std::vector<std::int64_t>> counts;  // states x child_card
  std::vector<std::int64_t> state_totals;         // length states
};

inline constexpr std::int64_t kDefaultStateCap = std::int64_t{1} << 24;

// Raw CSV contents: comma-separated, no quoting, first row is the header.
// Trailing empty lines are tolerated; data row k corresponds to line k+2.
struct CsvContent {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
CsvContent read_csv(const std::filesystem::path& path);

// Loads a complete-records CSV, dictionary-encoding raw values per attribute
// in first-appearance order. With a declared schema the header must match its
// names, observed codes must stay within the declared cardinalities, and the
// declared cardinalities win over the observed value counts.
Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<AttributeSchema>& declared = std::nullopt);

// Loads a CSV against a fixed dictionary (e.g. the one stored in a model
// file); raw values not present in the dictionary are a schema error.
Dataset load_csv_with_dictionary(const std::filesystem::path& path,
                                 const AttributeSchema& schema,
                                 const std::vector<std::vector<std::string>>& value_names);

PairCounts pair_counts(const Dataset& d, int i, int j);

// Parent configurations are mapped to state indices by mixed-radix encoding
// with the first listed parent most significant; an empty parent list yields
// a single state. States beyond `state_cap` are a capacity error.
CondCountTable conditional_counts(const Dataset& d, int child, std::span<const int> parents,
                                  std::int64_t state_cap = kDefaultStateCap);

// Mixed-radix helpers shared by counting, model evaluation, and imputation.
std::int64_t mixed_radix_encode(std::span<const ValueCode> values, std::span<const int> cards);
void mixed_radix_decode(std::int64_t state, std::span<const int> cards, std::span<ValueCode> out);

}  // namespace dendrolearn
