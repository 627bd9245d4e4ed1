#include "dendrolearn/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <unordered_set>

#include "dendrolearn/errors.hpp"

namespace dendrolearn {

void AttributeSchema::validate() const {
  if (names.empty()) throw SchemaError("schema must declare at least one attribute");
  if (names.size() != cards.size())
    throw SchemaError("schema has " + std::to_string(names.size()) + " names but " +
                      std::to_string(cards.size()) + " cardinalities");
  std::unordered_set<std::string_view> seen;
  for (const auto& name : names) {
    if (name.empty()) throw SchemaError("attribute names must be non-empty");
    if (!seen.insert(name).second) throw SchemaError("duplicate attribute name '" + name + "'");
  }
  for (std::size_t j = 0; j < cards.size(); ++j) {
    if (cards[j] < 1)
      throw SchemaError("attribute '" + names[j] + "' has cardinality " + std::to_string(cards[j]));
  }
}

Dataset::Dataset(AttributeSchema schema, std::vector<ValueCode> row_major,
                 std::vector<std::vector<std::string>> value_names)
    : schema_(std::move(schema)), data_(std::move(row_major)), value_names_(std::move(value_names)) {
  schema_.validate();
  const int r = schema_.size();
  if (data_.empty() || data_.size() % r != 0)
    throw SchemaError("dataset must contain at least one complete row");
  if (static_cast<int>(value_names_.size()) != r)
    throw SchemaError("value dictionary count does not match attribute count");

  value_codes_.resize(r);
  for (int j = 0; j < r; ++j) {
    if (static_cast<int>(value_names_[j].size()) != schema_.cards[j])
      throw SchemaError("attribute '" + schema_.names[j] + "' has " +
                        std::to_string(value_names_[j].size()) + " dictionary entries for cardinality " +
                        std::to_string(schema_.cards[j]));
    for (ValueCode c = 0; c < schema_.cards[j]; ++c) {
      if (!value_codes_[j].emplace(value_names_[j][c], c).second)
        throw SchemaError("attribute '" + schema_.names[j] + "' has duplicate value '" +
                          value_names_[j][c] + "'");
    }
  }
  for (std::size_t k = 0; k < data_.size(); ++k) {
    const int j = static_cast<int>(k % r);
    if (data_[k] < 0 || data_[k] >= schema_.cards[j])
      throw ArgumentError("value code " + std::to_string(data_[k]) + " out of range for attribute '" +
                          schema_.names[j] + "'");
  }
}

Dataset Dataset::from_codes(AttributeSchema schema,
                            const std::vector<std::vector<ValueCode>>& rows) {
  schema.validate();
  const int r = schema.size();
  std::vector<std::vector<std::string>> names(r);
  for (int j = 0; j < r; ++j) {
    names[j].reserve(schema.cards[j]);
    for (int c = 0; c < schema.cards[j]; ++c) names[j].push_back(std::to_string(c));
  }
  std::vector<ValueCode> flat;
  flat.reserve(rows.size() * r);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != r)
      throw ArgumentError("row has " + std::to_string(row.size()) + " values, expected " +
                          std::to_string(r));
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return Dataset(std::move(schema), std::move(flat), std::move(names));
}

std::optional<ValueCode> Dataset::code_of(int attr, std::string_view raw) const {
  const auto& map = value_codes_[attr - 1];
  auto it = map.find(std::string(raw));
  if (it == map.end()) return std::nullopt;
  return it->second;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string location(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line);
}

}  // namespace

CsvContent read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  for (auto& line : lines) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw ParseError(path.string() + ": file is empty");

  CsvContent csv;
  csv.header = split_fields(lines[0]);
  csv.rows.reserve(lines.size() - 1);
  for (std::size_t k = 1; k < lines.size(); ++k) {
    auto fields = split_fields(lines[k]);
    if (fields.size() != csv.header.size())
      throw ParseError(location(path, k + 1) + ": expected " + std::to_string(csv.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    csv.rows.push_back(std::move(fields));
  }
  return csv;
}

Dataset load_csv(const std::filesystem::path& path,
                 const std::optional<AttributeSchema>& declared) {
  CsvContent csv = read_csv(path);
  const int r = static_cast<int>(csv.header.size());

  if (declared) {
    declared->validate();
    if (declared->names != csv.header)
      throw SchemaError(path.string() + ": header does not match the declared attribute names");
  }
  if (csv.rows.empty()) throw SchemaError(path.string() + ": no data rows");

  std::vector<std::vector<std::string>> names(r);
  std::vector<std::unordered_map<std::string, ValueCode>> codes(r);
  std::vector<ValueCode> flat;
  flat.reserve(csv.rows.size() * r);

  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    const std::size_t line = k + 2;
    for (int j = 0; j < r; ++j) {
      const std::string& raw = csv.rows[k][j];
      if (raw.empty())
        throw MissingValueError(location(path, line) + ": empty value for attribute '" +
                                csv.header[j] + "' (complete records required)");
      auto [it, inserted] = codes[j].emplace(raw, static_cast<ValueCode>(names[j].size()));
      if (inserted) {
        if (declared && static_cast<int>(names[j].size()) >= declared->cards[j])
          throw SchemaError(location(path, line) + ": attribute '" + csv.header[j] +
                            "' exceeds declared cardinality " + std::to_string(declared->cards[j]));
        names[j].push_back(raw);
      }
      flat.push_back(it->second);
    }
  }

  AttributeSchema schema;
  schema.names = csv.header;
  if (declared) {
    schema.cards = declared->cards;
    // Pad dictionaries for declared codes never observed; pick a string that
    // does not collide with a real value.
    for (int j = 0; j < r; ++j) {
      while (static_cast<int>(names[j].size()) < schema.cards[j]) {
        std::string candidate = std::to_string(names[j].size());
        while (codes[j].count(candidate) != 0) candidate.insert(candidate.begin(), 'u');
        codes[j].emplace(candidate, static_cast<ValueCode>(names[j].size()));
        names[j].push_back(std::move(candidate));
      }
    }
  } else {
    schema.cards.resize(r);
    for (int j = 0; j < r; ++j) schema.cards[j] = static_cast<int>(names[j].size());
  }
  return Dataset(std::move(schema), std::move(flat), std::move(names));
}

Dataset load_csv_with_dictionary(const std::filesystem::path& path,
                                 const AttributeSchema& schema,
                                 const std::vector<std::vector<std::string>>& value_names) {
  CsvContent csv = read_csv(path);
  schema.validate();
  if (schema.names != csv.header)
    throw SchemaError(path.string() + ": header does not match the model's attribute names");
  if (csv.rows.empty()) throw SchemaError(path.string() + ": no data rows");

  const int r = schema.size();
  std::vector<std::unordered_map<std::string, ValueCode>> codes(r);
  for (int j = 0; j < r; ++j)
    for (ValueCode c = 0; c < static_cast<ValueCode>(value_names[j].size()); ++c)
      codes[j].emplace(value_names[j][c], c);

  std::vector<ValueCode> flat;
  flat.reserve(csv.rows.size() * r);
  for (std::size_t k = 0; k < csv.rows.size(); ++k) {
    const std::size_t line = k + 2;
    for (int j = 0; j < r; ++j) {
      const std::string& raw = csv.rows[k][j];
      if (raw.empty())
        throw MissingValueError(location(path, line) + ": empty value for attribute '" +
                                schema.names[j] + "'");
      auto it = codes[j].find(raw);
      if (it == codes[j].end())
        throw SchemaError(location(path, line) + ": unknown value '" + raw + "' for attribute '" +
                          schema.names[j] + "'");
      flat.push_back(it->second);
    }
  }
  return Dataset(schema, std::move(flat), value_names);
}

PairCounts pair_counts(const Dataset& d, int i, int j) {
  const int r = d.attribute_count();
  if (i < 1 || i > r || j < 1 || j > r)
    throw ArgumentError("attribute index out of range 1.." + std::to_string(r));
  if (i == j) throw ArgumentError("pair_counts requires two distinct attributes");

  PairCounts pc;
  pc.i = i;
  pc.j = j;
  pc.n = d.row_count();
  pc.table.assign(d.card(i), std::vector<std::int64_t>(d.card(j), 0));
  for (std::int64_t row = 0; row < pc.n; ++row) ++pc.table[d.value(row, i)][d.value(row, j)];
  return pc;
}

std::int64_t mixed_radix_encode(std::span<const ValueCode> values, std::span<const int> cards) {
  std::int64_t s = 0;
  for (std::size_t k = 0; k < values.size(); ++k) s = s * cards[k] + values[k];
  return s;
}

void mixed_radix_decode(std::int64_t state, std::span<const int> cards, std::span<ValueCode> out) {
  for (std::size_t k = cards.size(); k-- > 0;) {
    out[k] = static_cast<ValueCode>(state % cards[k]);
    state /= cards[k];
  }
}

CondCountTable conditional_counts(const Dataset& d, int child, std::span<const int> parents,
                                  std::int64_t state_cap) {
  const int r = d.attribute_count();
  if (child < 1 || child > r) throw ArgumentError("child attribute index out of range");
  std::vector<int> seen;
  for (int p : parents) {
    if (p < 1 || p > r) throw ArgumentError("parent attribute index out of range");
    if (p == child) throw ArgumentError("child attribute cannot be its own parent");
    if (std::find(seen.begin(), seen.end(), p) != seen.end())
      throw ArgumentError("duplicate parent attribute " + std::to_string(p));
    seen.push_back(p);
  }

  std::int64_t states = 1;
  std::vector<int> parent_cards;
  parent_cards.reserve(parents.size());
  for (int p : parents) {
    const int c = d.card(p);
    if (states > state_cap / c)
      throw CapacityError("parent state space exceeds the cap of " + std::to_string(state_cap) +
                          " states");
    states *= c;
    parent_cards.push_back(c);
  }

  CondCountTable t;
  t.child = child;
  t.child_card = d.card(child);
  t.n = d.row_count();
  t.states = states;
  t.counts.assign(states, std::vector<std::int64_t>(t.child_card, 0));
  t.state_totals.assign(states, 0);

  std::vector<ValueCode> config(parents.size());
  for (std::int64_t row = 0; row < t.n; ++row) {
    for (std::size_t k = 0; k < parents.size(); ++k) config[k] = d.value(row, parents[k]);
    const std::int64_t s = mixed_radix_encode(config, parent_cards);
    ++t.counts[s][d.value(row, child)];
    ++t.state_totals[s];
  }
  return t;
}

}  // namespace dendrolearn
