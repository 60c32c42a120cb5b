#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace longkey::evaluation {

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Top-min(K, M) matching against the truth set. Truth must be non-empty
// (documents without usable truth are excluded before this point) and the
// predicted keys unique.
Prf prf_at_k(const std::vector<std::string>& predicted, const std::set<std::string>& truth,
             int k);

// prf_at_k with K = |truth|.
double f1_at_oracle(const std::vector<std::string>& predicted, const std::set<std::string>& truth);

struct DocEval {
  std::string id;
  std::vector<std::string> predicted;  // ranked stemmed keys
  std::set<std::string> truth;         // normalized, deduplicated
};

struct BestK {
  double f1 = 0.0;
  int k = 1;
};

// Shared global K in [1, limit] maximizing the averaged F1@K; ties go to the
// smaller K.
BestK f1_at_best(const std::vector<DocEval>& docs, int limit = 100, bool micro = false);

struct PerDocRecord {
  std::string id;
  int truth_size = 0;
  int predicted_size = 0;
  double f1_at_oracle = 0.0;
};

struct EvalConfig {
  std::vector<int> ks;
  bool micro = false;  // macro averaging by default
  int best_k_limit = 100;
  bool per_document = false;
};

struct EvalReport {
  int documents = 0;
  int evaluated = 0;
  int excluded_empty_truth = 0;
  std::string averaging;
  std::map<int, Prf> at_k;
  double f1_oracle = 0.0;
  BestK best;
  std::vector<PerDocRecord> per_document;
};

// Macro (or micro) metrics over documents with non-empty truth. Predictions
// are deduplicated by stemmed key, first position kept. Throws on an empty
// dataset or when every document lacks usable truth.
EvalReport evaluate(const std::vector<DocEval>& docs, const EvalConfig& cfg);

std::string to_json_string(const EvalReport& report, int indent = 2);
std::string summary_table(const EvalReport& report);

}  // namespace longkey::evaluation
