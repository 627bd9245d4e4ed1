#include "dendrolearn/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dendrolearn/errors.hpp"
#include "dendrolearn/rng.hpp"

namespace dendrolearn {

namespace {

constexpr const char* kModelHeader = "dendrolearn-model v1";

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::int64_t state_of(const FittedModel& m, int node, std::span<const ValueCode> record) {
  const auto& parents = m.structure.parents_of(node);
  std::vector<ValueCode> config(parents.size());
  std::vector<int> cards(parents.size());
  for (std::size_t k = 0; k < parents.size(); ++k) {
    config[k] = record[parents[k] - 1];
    cards[k] = m.schema.cards[parents[k] - 1];
  }
  return mixed_radix_encode(config, cards);
}

}  // namespace

std::string penalty_to_string(const Penalty& p) {
  switch (p.kind) {
    case PenaltyKind::MDL:
      return "mdl";
    case PenaltyKind::AIC:
      return "aic";
    case PenaltyKind::ML:
      return "ml";
    case PenaltyKind::Custom:
      return "custom:" + format_double(p.custom_c);
  }
  return "mdl";
}

Penalty penalty_from_string(const std::string& spec) {
  if (spec == "mdl") return Penalty::mdl();
  if (spec == "aic") return Penalty::aic();
  if (spec == "ml") return Penalty::ml();
  if (spec.rfind("custom:", 0) == 0) {
    const std::string number = spec.substr(7);
    std::size_t used = 0;
    double c = 0.0;
    try {
      c = std::stod(number, &used);
    } catch (const std::exception&) {
      throw ArgumentError("invalid penalty '" + spec + "'");
    }
    if (used != number.size()) throw ArgumentError("invalid penalty '" + spec + "'");
    return Penalty::custom(c);
  }
  throw ArgumentError("invalid penalty '" + spec + "' (expected mdl, aic, ml, or custom:<c>)");
}

FittedModel fit_parameters(const BbnStructure& structure, const Dataset& d, double a,
                           const Penalty& penalty) {
  if (!(a > 0.0)) throw ArgumentError("smoothing weight a must be > 0");
  validate_structure(structure, d.attribute_count());

  FittedModel m;
  m.schema = d.schema();
  m.values = d.value_names();
  m.structure = structure;
  m.fitted_n = d.row_count();
  m.penalty = penalty;
  m.a = a;
  m.params.rows.resize(d.attribute_count());

  for (int node : structure.order) {
    const CondCountTable t = conditional_counts(d, node, structure.parents_of(node));
    auto& table = m.params.rows[node - 1];
    table.assign(t.states, std::vector<double>(t.child_card, 0.0));
    for (std::int64_t s = 0; s < t.states; ++s) {
      const double denom = static_cast<double>(t.state_totals[s]) + a * t.child_card;
      for (int q = 0; q < t.child_card; ++q)
        table[s][q] = (static_cast<double>(t.counts[s][q]) + a) / denom;
    }
  }
  return m;
}

double joint_probability(const FittedModel& m, std::span<const ValueCode> record) {
  const int r = m.schema.size();
  if (static_cast<int>(record.size()) != r)
    throw ArgumentError("record has " + std::to_string(record.size()) + " values, expected " +
                        std::to_string(r));
  for (int j = 0; j < r; ++j) {
    if (record[j] < 0 || record[j] >= m.schema.cards[j])
      throw ArgumentError("value out of range for attribute '" + m.schema.names[j] + "'");
  }
  double prob = 1.0;
  for (int node : m.structure.order)
    prob *= m.params.rows[node - 1][state_of(m, node, record)][record[node - 1]];
  return prob;
}

Dataset sample(const FittedModel& m, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw ArgumentError("sample size must be >= 1");
  const int r = m.schema.size();
  SplitMix64 rng(seed);
  std::vector<ValueCode> flat(static_cast<std::size_t>(n) * r);
  std::vector<ValueCode> record(r);
  for (std::int64_t row = 0; row < n; ++row) {
    for (int node : m.structure.order) {
      const auto& probs = m.params.rows[node - 1][state_of(m, node, record)];
      const double u = rng.next_unit();
      double cum = 0.0;
      ValueCode pick = static_cast<ValueCode>(probs.size()) - 1;
      for (std::size_t q = 0; q < probs.size(); ++q) {
        cum += probs[q];
        if (u < cum) {
          pick = static_cast<ValueCode>(q);
          break;
        }
      }
      record[node - 1] = pick;
    }
    std::copy(record.begin(), record.end(), flat.begin() + row * r);
  }
  return Dataset(m.schema, std::move(flat), m.values);
}

void save_model(const FittedModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path.string() + "' for writing");
  const int r = m.schema.size();

  out << kModelHeader << "\n";
  out << "meta n=" << m.fitted_n << " penalty=" << penalty_to_string(m.penalty)
      << " a=" << format_double(m.a) << "\n";
  out << "attributes " << r << "\n";
  for (int j = 0; j < r; ++j) out << m.schema.names[j] << ":" << m.schema.cards[j] << "\n";
  out << "values\n";
  for (int j = 0; j < r; ++j) {
    for (std::size_t c = 0; c < m.values[j].size(); ++c) {
      if (c > 0) out << ",";
      out << m.values[j][c];
    }
    out << "\n";
  }
  out << "structure\n";
  for (int node : m.structure.order) {
    out << node << ":";
    for (int p : m.structure.parents_of(node)) out << " " << p;
    out << "\n";
  }
  out << "params\n";
  for (int node : m.structure.order) {
    const auto& table = m.params.rows[node - 1];
    for (std::size_t s = 0; s < table.size(); ++s) {
      out << node << " " << s;
      for (double p : table[s]) out << " " << format_double(p);
      out << "\n";
    }
  }
  if (!out) throw ParseError("failed writing '" + path.string() + "'");
}

namespace {

struct LineReader {
  std::vector<std::string> lines;
  std::size_t next = 0;
  std::string source;

  std::string location() const { return source + ":" + std::to_string(next); }
  bool done() const { return next >= lines.size(); }
  const std::string& take(const char* what) {
    if (done()) throw SchemaError(source + ": unexpected end of file, expected " + what);
    return lines[next++];
  }
};

std::vector<std::string> split_on(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(line.substr(start));
      return parts;
    }
    parts.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_int(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(where + ": expected an integer, got '" + text + "'");
  }
}

double parse_prob(const std::string& text, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw SchemaError(where + ": expected a probability, got '" + text + "'");
  }
}

}  // namespace

FittedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");

  LineReader reader;
  reader.source = path.string();
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    reader.lines.push_back(line);
  }
  while (!reader.lines.empty() && reader.lines.back().empty()) reader.lines.pop_back();

  if (reader.take("version header") != kModelHeader)
    throw SchemaError(path.string() + ":1: unsupported model file version (expected '" +
                      std::string(kModelHeader) + "')");

  FittedModel m;

  // meta line
  {
    std::istringstream meta(reader.take("meta line"));
    std::string tag;
    meta >> tag;
    if (tag != "meta") throw SchemaError(reader.location() + ": expected 'meta' line");
    std::string field;
    bool have_n = false, have_penalty = false, have_a = false;
    while (meta >> field) {
      const std::size_t eq = field.find('=');
      if (eq == std::string::npos)
        throw SchemaError(reader.location() + ": malformed meta field '" + field + "'");
      const std::string key = field.substr(0, eq);
      const std::string value = field.substr(eq + 1);
      if (key == "n") {
        m.fitted_n = parse_int(value, reader.location());
        have_n = true;
      } else if (key == "penalty") {
        m.penalty = penalty_from_string(value);
        have_penalty = true;
      } else if (key == "a") {
        m.a = parse_prob(value, reader.location());
        have_a = true;
      } else {
        throw SchemaError(reader.location() + ": unknown meta field '" + key + "'");
      }
    }
    if (!have_n || !have_penalty || !have_a)
      throw SchemaError(reader.location() + ": meta line must carry n, penalty, and a");
    if (!(m.a > 0.0)) throw SchemaError(reader.location() + ": meta a must be > 0");
  }

  // schema block
  {
    std::istringstream head(reader.take("attributes line"));
    std::string tag;
    std::int64_t r = 0;
    head >> tag >> r;
    if (tag != "attributes" || r < 1)
      throw SchemaError(reader.location() + ": expected 'attributes <count>'");
    for (std::int64_t j = 0; j < r; ++j) {
      const std::string& entry = reader.take("attribute declaration");
      const std::size_t colon = entry.rfind(':');
      if (colon == std::string::npos || colon == 0)
        throw SchemaError(reader.location() + ": expected '<name>:<cardinality>'");
      m.schema.names.push_back(entry.substr(0, colon));
      m.schema.cards.push_back(
          static_cast<int>(parse_int(entry.substr(colon + 1), reader.location())));
    }
    m.schema.validate();
  }
  const int r = m.schema.size();

  // values block
  if (reader.take("values block") != "values")
    throw SchemaError(reader.location() + ": expected 'values'");
  for (int j = 0; j < r; ++j) {
    auto entries = split_on(reader.take("value dictionary line"), ',');
    if (static_cast<int>(entries.size()) != m.schema.cards[j])
      throw SchemaError(reader.location() + ": attribute '" + m.schema.names[j] + "' needs " +
                        std::to_string(m.schema.cards[j]) + " values, got " +
                        std::to_string(entries.size()));
    auto sorted = entries;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw SchemaError(reader.location() + ": attribute '" + m.schema.names[j] +
                        "' has duplicate values");
    m.values.push_back(std::move(entries));
  }

  // structure block
  if (reader.take("structure block") != "structure")
    throw SchemaError(reader.location() + ": expected 'structure'");
  m.structure.parents.assign(r, {});
  for (int t = 0; t < r; ++t) {
    const std::string& entry = reader.take("structure line");
    const std::size_t colon = entry.find(':');
    if (colon == std::string::npos)
      throw SchemaError(reader.location() + ": expected '<node>: <parents>'");
    const int node = static_cast<int>(parse_int(entry.substr(0, colon), reader.location()));
    if (node < 1 || node > r)
      throw SchemaError(reader.location() + ": node index out of range");
    m.structure.order.push_back(node);
    std::istringstream rest(entry.substr(colon + 1));
    std::string token;
    while (rest >> token)
      m.structure.parents[node - 1].push_back(
          static_cast<int>(parse_int(token, reader.location())));
    std::sort(m.structure.parents[node - 1].begin(), m.structure.parents[node - 1].end());
  }
  try {
    validate_structure(m.structure, r);
  } catch (const ArgumentError& e) {
    throw SchemaError(path.string() + ": invalid structure: " + e.what());
  }

  // params block
  if (reader.take("params block") != "params")
    throw SchemaError(reader.location() + ": expected 'params'");
  m.params.rows.resize(r);
  for (int node : m.structure.order) {
    std::int64_t states = 1;
    for (int p : m.structure.parents_of(node)) states *= m.schema.cards[p - 1];
    const int card = m.schema.cards[node - 1];
    auto& table = m.params.rows[node - 1];
    table.assign(states, std::vector<double>(card, 0.0));
    for (std::int64_t s = 0; s < states; ++s) {
      std::istringstream row(reader.take("parameter row"));
      std::int64_t got_node = 0, got_state = 0;
      row >> got_node >> got_state;
      if (got_node != node || got_state != s)
        throw SchemaError(reader.location() + ": expected parameters for node " +
                          std::to_string(node) + " state " + std::to_string(s));
      double sum = 0.0;
      for (int q = 0; q < card; ++q) {
        std::string token;
        if (!(row >> token))
          throw SchemaError(reader.location() + ": row needs " + std::to_string(card) +
                            " probabilities");
        const double v = parse_prob(token, reader.location());
        if (!(v > 0.0) || !(v <= 1.0))
          throw SchemaError(reader.location() + ": probabilities must lie in (0, 1]");
        table[s][q] = v;
        sum += v;
      }
      std::string extra;
      if (row >> extra)
        throw SchemaError(reader.location() + ": too many probabilities on the row");
      if (std::abs(sum - 1.0) > 1e-6)
        throw SchemaError(reader.location() + ": probabilities sum to " + format_double(sum) +
                          ", not 1");
    }
  }
  if (!reader.done()) throw SchemaError(reader.location() + ": trailing content after params");
  return m;
}

}  // namespace dendrolearn
