#pragma once

#include <string>
#include <vector>

namespace dnaood {

struct LogitRow {
  std::string image_id;
  std::string specimen_id;
  std::string true_class;  // may name a taxon outside class_names (outlier images)
  std::vector<double> logits;
};

// Persisted classifier outputs. class_names fixes the column order of the
// logit vectors; it comes from a sidecar class-map CSV so columns can never
// be silently permuted.
struct LogitTable {
  std::vector<std::string> class_names;
  std::vector<LogitRow> rows;

  std::size_t n_classes() const { return class_names.size(); }
};

// Class map CSV: header `index,taxon_id`, indices covering exactly 0..C-1.
std::vector<std::string> load_class_map(const std::string& path);

// Logit CSV: header `image_id,specimen_id,true_class,logit_0,...,logit_{C-1}`
// with C given by the class map. Validates row arity, numeric and finite
// logits, and image_id uniqueness; errors name the offending row or id.
LogitTable load_logit_table(const std::string& logits_path, const std::string& class_map_path);

std::string to_csv(const LogitTable& table);
std::string class_map_to_csv(const std::vector<std::string>& class_names);

}  // namespace dnaood
