#include "longkey/corpus.hpp"

#include <cctype>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include <json.hpp>

namespace longkey::corpus {

namespace {

bool is_punct_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 0x80 && std::ispunct(u);
}

bool all_punct(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_punct_char(c)) return false;
  return true;
}

void emit_unit(std::string_view unit, std::vector<std::string>& words,
               std::vector<uint8_t>& is_punct) {
  words.emplace_back(unit);
  is_punct.push_back(all_punct(unit) ? 1 : 0);
}

}  // namespace

std::set<std::string> Document::truth_keys() const {
  std::set<std::string> keys;
  for (const auto& gt : ground_truth) keys.insert(gt.norm.stemmed_key);
  return keys;
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

void segment_text(std::string_view text, std::vector<std::string>& words,
                  std::vector<uint8_t>& is_punct) {
  size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos >= text.size()) break;
    size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end]))) ++end;
    std::string_view chunk = text.substr(pos, end - pos);
    pos = end;

    // Peel punctuation runs off both ends; each run becomes its own unit.
    std::vector<std::string_view> leading, trailing;
    while (!chunk.empty() && is_punct_char(chunk.front())) {
      size_t run = 1;
      while (run < chunk.size() && is_punct_char(chunk[run])) ++run;
      if (run == chunk.size()) break;  // all-punct remainder is one unit
      leading.push_back(chunk.substr(0, run));
      chunk.remove_prefix(run);
    }
    while (!chunk.empty() && !all_punct(chunk) && is_punct_char(chunk.back())) {
      size_t run = 1;
      while (run < chunk.size() && is_punct_char(chunk[chunk.size() - 1 - run])) ++run;
      trailing.push_back(chunk.substr(chunk.size() - run));
      chunk.remove_suffix(run);
    }
    for (auto u : leading) emit_unit(u, words, is_punct);
    if (!chunk.empty()) emit_unit(chunk, words, is_punct);
    for (auto it = trailing.rbegin(); it != trailing.rend(); ++it)
      emit_unit(*it, words, is_punct);
  }
}

NormalizedKeyphrase normalize_keyphrase(const std::vector<std::string>& words) {
  if (words.empty()) throw std::invalid_argument("normalize_keyphrase: empty word sequence");
  std::string key;
  for (const auto& w : words) {
    if (w.empty()) throw std::invalid_argument("normalize_keyphrase: empty word");
    if (!key.empty()) key += ' ';
    key += porter_stem(lower_ascii(w));
  }
  return {std::move(key), static_cast<int>(words.size())};
}

std::vector<GroundTruth> dedup_ground_truth(const std::vector<std::vector<std::string>>& raw) {
  std::vector<GroundTruth> out;
  std::unordered_set<std::string> seen;
  for (const auto& words : raw) {
    if (words.empty()) continue;
    NormalizedKeyphrase norm = normalize_keyphrase(words);
    if (!seen.insert(norm.stemmed_key).second) continue;
    std::string surface;
    for (const auto& w : words) {
      if (!surface.empty()) surface += ' ';
      surface += w;
    }
    out.push_back({std::move(norm), std::move(surface)});
  }
  return out;
}

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& path, long line, const std::string& what) {
  std::ostringstream os;
  os << path << ": line " << line << ": " << what;
  throw std::runtime_error(os.str());
}

Document parse_line(const std::string& path, long line_no, const std::string& line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    schema_error(path, line_no, std::string("malformed JSON: ") + e.what());
  }
  if (!obj.is_object()) schema_error(path, line_no, "expected a JSON object");
  if (!obj.contains("id")) schema_error(path, line_no, "missing field 'id'");
  if (!obj.contains("document")) schema_error(path, line_no, "missing field 'document'");
  if (!obj.contains("keyphrases")) schema_error(path, line_no, "missing field 'keyphrases'");

  Document doc;
  const auto& id = obj["id"];
  if (id.is_string())
    doc.id = id.get<std::string>();
  else if (id.is_number_integer())
    doc.id = std::to_string(id.get<long long>());
  else
    schema_error(path, line_no, "'id' must be a string or integer");

  std::string text;
  const auto& body = obj["document"];
  if (body.is_string()) {
    text = body.get<std::string>();
  } else if (body.is_array()) {
    for (const auto& section : body) {
      if (!section.is_string())
        schema_error(path, line_no, "'document' sections must be strings");
      if (!text.empty()) text += ' ';
      text += section.get<std::string>();
    }
  } else {
    schema_error(path, line_no, "'document' must be a string or array of strings");
  }
  segment_text(text, doc.words, doc.is_punct);

  const auto& phrases = obj["keyphrases"];
  if (!phrases.is_array()) schema_error(path, line_no, "'keyphrases' must be an array");
  std::vector<std::vector<std::string>> raw;
  for (const auto& p : phrases) {
    if (!p.is_string()) schema_error(path, line_no, "'keyphrases' entries must be strings");
    // Segment like document text and drop punctuation units so truth and
    // candidate identities live in the same space.
    std::vector<std::string> units;
    std::vector<uint8_t> punct;
    segment_text(p.get<std::string>(), units, punct);
    std::vector<std::string> kept;
    for (size_t i = 0; i < units.size(); ++i)
      if (!punct[i]) kept.push_back(units[i]);
    if (!kept.empty()) raw.push_back(std::move(kept));
  }
  doc.ground_truth = dedup_ground_truth(raw);
  return doc;
}

}  // namespace

JsonlReader::JsonlReader(const std::string& path) : path_(path), in_(path) {
  if (!in_.is_open()) throw std::runtime_error("cannot open dataset file: " + path);
}

std::optional<Document> JsonlReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_no_;
    bool blank = true;
    for (char c : line)
      if (!std::isspace(static_cast<unsigned char>(c))) {
        blank = false;
        break;
      }
    if (blank) continue;
    return parse_line(path_, line_no_, line);
  }
  return std::nullopt;
}

std::vector<Document> load_jsonl(const std::string& path) {
  JsonlReader reader(path);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

}  // namespace longkey::corpus
