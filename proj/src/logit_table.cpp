#include "dnaood/logit_table.hpp"

#include <cmath>
#include <set>
#include <unordered_set>

#include "dnaood/csv.hpp"
#include "dnaood/errors.hpp"

namespace dnaood {

std::vector<std::string> load_class_map(const std::string& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ValidationError(path + ": empty class map");
  {
    const auto header = split_csv_line(lines[0]);
    if (header.size() != 2 || header[0] != "index" || header[1] != "taxon_id") {
      throw ValidationError(path + ": malformed class map header, expected 'index,taxon_id'");
    }
  }

  std::vector<std::pair<std::size_t, std::string>> entries;
  std::set<std::string> seen_taxa;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i] == "\r") continue;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 2) {
      throw ValidationError(path + ": line " + std::to_string(i + 1) + ": expected 2 fields, got " +
                            std::to_string(fields.size()));
    }
    std::size_t index = 0;
    try {
      std::size_t consumed = 0;
      index = std::stoul(fields[0], &consumed);
      if (consumed != fields[0].size()) throw std::invalid_argument("trailing junk");
    } catch (const std::exception&) {
      throw ValidationError(path + ": line " + std::to_string(i + 1) + ": bad class index '" +
                            fields[0] + "'");
    }
    if (fields[1].empty()) {
      throw ValidationError(path + ": line " + std::to_string(i + 1) + ": empty taxon_id");
    }
    if (!seen_taxa.insert(fields[1]).second) {
      throw ValidationError(path + ": duplicate taxon_id '" + fields[1] + "' in class map");
    }
    entries.emplace_back(index, fields[1]);
  }

  if (entries.size() < 2) {
    throw ValidationError(path + ": class map must define at least 2 classes, got " +
                          std::to_string(entries.size()));
  }

  std::vector<std::string> class_names(entries.size());
  std::vector<bool> filled(entries.size(), false);
  for (const auto& [index, taxon] : entries) {
    if (index >= entries.size() || filled[index]) {
      throw ValidationError(path + ": class map indices must cover exactly 0.." +
                            std::to_string(entries.size() - 1) + " (gap or duplicate at index " +
                            std::to_string(index) + ")");
    }
    filled[index] = true;
    class_names[index] = taxon;
  }
  return class_names;
}

LogitTable load_logit_table(const std::string& logits_path, const std::string& class_map_path) {
  LogitTable table;
  table.class_names = load_class_map(class_map_path);
  const std::size_t n_classes = table.class_names.size();

  const std::vector<std::string> lines = read_lines(logits_path);
  if (lines.empty()) throw ValidationError(logits_path + ": empty logit table");

  {
    const auto header = split_csv_line(lines[0]);
    std::vector<std::string> expected = {"image_id", "specimen_id", "true_class"};
    for (std::size_t c = 0; c < n_classes; ++c) expected.push_back("logit_" + std::to_string(c));
    if (header != expected) {
      throw ValidationError(logits_path +
                            ": malformed header, expected 'image_id,specimen_id,true_class,logit_0,"
                            "...,logit_" + std::to_string(n_classes - 1) + "'");
    }
  }

  std::unordered_set<std::string> seen_ids;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i] == "\r") continue;
    const auto fields = split_csv_line(lines[i]);
    if (fields.size() != 3 + n_classes) {
      throw ValidationError(logits_path + ": line " + std::to_string(i + 1) + ": expected " +
                            std::to_string(3 + n_classes) + " fields, got " +
                            std::to_string(fields.size()));
    }
    LogitRow row;
    row.image_id = fields[0];
    row.specimen_id = fields[1];
    row.true_class = fields[2];
    if (row.image_id.empty()) {
      throw ValidationError(logits_path + ": line " + std::to_string(i + 1) + ": empty image_id");
    }
    if (!seen_ids.insert(row.image_id).second) {
      throw ValidationError(logits_path + ": duplicate image_id '" + row.image_id + "'");
    }
    row.logits.reserve(n_classes);
    for (std::size_t c = 0; c < n_classes; ++c) {
      double v = 0.0;
      if (!parse_double(fields[3 + c], v) || !std::isfinite(v)) {
        throw ValidationError(logits_path + ": line " + std::to_string(i + 1) +
                              ": non-numeric logit '" + fields[3 + c] + "' in column logit_" +
                              std::to_string(c));
      }
      row.logits.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }

  if (table.rows.empty()) throw ValidationError(logits_path + ": no data rows");
  return table;
}

std::string to_csv(const LogitTable& table) {
  std::string out = "image_id,specimen_id,true_class";
  for (std::size_t c = 0; c < table.n_classes(); ++c) out += ",logit_" + std::to_string(c);
  out += '\n';
  for (const auto& row : table.rows) {
    out += row.image_id;
    out += ',';
    out += row.specimen_id;
    out += ',';
    out += row.true_class;
    for (double v : row.logits) {
      out += ',';
      out += format_double(v);
    }
    out += '\n';
  }
  return out;
}

std::string class_map_to_csv(const std::vector<std::string>& class_names) {
  std::string out = "index,taxon_id\n";
  for (std::size_t c = 0; c < class_names.size(); ++c) {
    out += std::to_string(c) + "," + class_names[c] + "\n";
  }
  return out;
}

}  // namespace dnaood
