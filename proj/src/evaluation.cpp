#include "longkey/evaluation.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace longkey::evaluation {

namespace {

double f1_of(double p, double r) { return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

int hits_at(const std::vector<std::string>& predicted, const std::set<std::string>& truth,
            int top) {
  int hits = 0;
  for (int i = 0; i < top; ++i)
    if (truth.count(predicted[i])) ++hits;
  return hits;
}

std::vector<DocEval> prepare(const std::vector<DocEval>& docs, int* excluded) {
  std::vector<DocEval> kept;
  int skipped = 0;
  for (const auto& doc : docs) {
    if (doc.truth.empty()) {
      ++skipped;
      continue;
    }
    DocEval clean;
    clean.id = doc.id;
    clean.truth = doc.truth;
    std::unordered_set<std::string> seen;
    for (const auto& key : doc.predicted)
      if (seen.insert(key).second) clean.predicted.push_back(key);
    kept.push_back(std::move(clean));
  }
  if (excluded) *excluded = skipped;
  return kept;
}

Prf averaged_at_k(const std::vector<DocEval>& docs, int k, bool micro) {
  if (micro) {
    long hits = 0, pred = 0, truth = 0;
    for (const auto& doc : docs) {
      int top = std::min<int>(k, static_cast<int>(doc.predicted.size()));
      hits += hits_at(doc.predicted, doc.truth, top);
      pred += top;
      truth += static_cast<long>(doc.truth.size());
    }
    Prf out;
    out.precision = pred > 0 ? static_cast<double>(hits) / pred : 0.0;
    out.recall = truth > 0 ? static_cast<double>(hits) / truth : 0.0;
    out.f1 = f1_of(out.precision, out.recall);
    return out;
  }
  Prf acc;
  for (const auto& doc : docs) {
    Prf one = prf_at_k(doc.predicted, doc.truth, k);
    acc.precision += one.precision;
    acc.recall += one.recall;
    acc.f1 += one.f1;
  }
  double n = static_cast<double>(docs.size());
  return {acc.precision / n, acc.recall / n, acc.f1 / n};
}

double averaged_oracle(const std::vector<DocEval>& docs, bool micro) {
  if (micro) {
    long hits = 0, pred = 0, truth = 0;
    for (const auto& doc : docs) {
      int k = static_cast<int>(doc.truth.size());
      int top = std::min<int>(k, static_cast<int>(doc.predicted.size()));
      hits += hits_at(doc.predicted, doc.truth, top);
      pred += top;
      truth += static_cast<long>(doc.truth.size());
    }
    double p = pred > 0 ? static_cast<double>(hits) / pred : 0.0;
    double r = truth > 0 ? static_cast<double>(hits) / truth : 0.0;
    return f1_of(p, r);
  }
  double acc = 0.0;
  for (const auto& doc : docs) acc += f1_at_oracle(doc.predicted, doc.truth);
  return acc / static_cast<double>(docs.size());
}

}  // namespace

Prf prf_at_k(const std::vector<std::string>& predicted, const std::set<std::string>& truth,
             int k) {
  if (k < 1) throw std::invalid_argument("prf_at_k: K must be >= 1");
  if (truth.empty()) throw std::invalid_argument("prf_at_k: empty truth set");
  {
    std::unordered_set<std::string> uniq(predicted.begin(), predicted.end());
    if (uniq.size() != predicted.size())
      throw std::invalid_argument("prf_at_k: predicted keys must be unique");
  }
  int top = std::min<int>(k, static_cast<int>(predicted.size()));
  int hits = hits_at(predicted, truth, top);
  Prf out;
  out.precision = top > 0 ? static_cast<double>(hits) / top : 0.0;
  out.recall = static_cast<double>(hits) / static_cast<double>(truth.size());
  out.f1 = f1_of(out.precision, out.recall);
  return out;
}

double f1_at_oracle(const std::vector<std::string>& predicted,
                    const std::set<std::string>& truth) {
  return prf_at_k(predicted, truth, static_cast<int>(truth.size())).f1;
}

BestK f1_at_best(const std::vector<DocEval>& docs, int limit, bool micro) {
  auto kept = prepare(docs, nullptr);
  if (kept.empty()) throw std::invalid_argument("f1_at_best: no documents with ground truth");
  BestK best{-1.0, 1};
  for (int k = 1; k <= limit; ++k) {
    double f1 = averaged_at_k(kept, k, micro).f1;
    if (f1 > best.f1) best = {f1, k};
  }
  return best;
}

EvalReport evaluate(const std::vector<DocEval>& docs, const EvalConfig& cfg) {
  if (docs.empty()) throw std::invalid_argument("evaluate: empty dataset");
  for (int k : cfg.ks)
    if (k < 1) throw std::invalid_argument("evaluate: every K must be >= 1");

  EvalReport report;
  report.documents = static_cast<int>(docs.size());
  auto kept = prepare(docs, &report.excluded_empty_truth);
  report.evaluated = static_cast<int>(kept.size());
  if (kept.empty()) throw std::invalid_argument("evaluate: no documents with ground truth");
  report.averaging = cfg.micro ? "micro" : "macro";

  for (int k : cfg.ks) report.at_k[k] = averaged_at_k(kept, k, cfg.micro);
  report.f1_oracle = averaged_oracle(kept, cfg.micro);
  report.best = f1_at_best(kept, cfg.best_k_limit, cfg.micro);

  if (cfg.per_document) {
    for (const auto& doc : kept)
      report.per_document.push_back({doc.id, static_cast<int>(doc.truth.size()),
                                     static_cast<int>(doc.predicted.size()),
                                     f1_at_oracle(doc.predicted, doc.truth)});
  }
  return report;
}

std::string to_json_string(const EvalReport& report, int indent) {
  nlohmann::json j;
  j["documents"] = report.documents;
  j["evaluated"] = report.evaluated;
  j["excluded_empty_truth"] = report.excluded_empty_truth;
  j["averaging"] = report.averaging;
  nlohmann::json at_k = nlohmann::json::object();
  for (const auto& [k, prf] : report.at_k)
    at_k[std::to_string(k)] = {
        {"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
  j["at_k"] = at_k;
  j["f1_at_oracle"] = report.f1_oracle;
  j["f1_at_best"] = {{"f1", report.best.f1}, {"k", report.best.k}};
  if (!report.per_document.empty()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& rec : report.per_document)
      rows.push_back({{"id", rec.id},
                      {"truth_size", rec.truth_size},
                      {"predicted_size", rec.predicted_size},
                      {"f1_at_oracle", rec.f1_at_oracle}});
    j["per_document"] = rows;
  }
  return j.dump(indent);
}

std::string summary_table(const EvalReport& report) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  os << "documents: " << report.documents << " (evaluated " << report.evaluated
     << ", excluded " << report.excluded_empty_truth << ", " << report.averaging << ")\n";
  os << "      K  precision     recall         f1\n";
  for (const auto& [k, prf] : report.at_k) {
    os.width(7);
    os << k << "  ";
    os.width(9);
    os << prf.precision << "  ";
    os.width(9);
    os << prf.recall << "  ";
    os.width(9);
    os << prf.f1 << "\n";
  }
  os << "F1@O    " << report.f1_oracle << "\n";
  os << "F1@Best " << report.best.f1 << " at K=" << report.best.k << "\n";
  return os.str();
}

}  // namespace longkey::evaluation
