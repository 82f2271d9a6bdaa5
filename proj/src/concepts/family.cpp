#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include "json.hpp"
#include "lap/concepts.hpp"
#include "lap/error.hpp"
#include "lap/model.hpp"

namespace lap {

namespace fs = std::filesystem;
using nlohmann::json;

const char* family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::core: return "core";
    case FamilyKind::controlled_binary: return "controlled_binary";
    case FamilyKind::custom: return "custom";
  }
  return "?";
}

FamilyKind family_kind_from_name(const std::string& name) {
  if (name == "core") return FamilyKind::core;
  if (name == "controlled_binary") return FamilyKind::controlled_binary;
  if (name == "custom") return FamilyKind::custom;
  throw data_error("unknown family kind: " + name);
}

void ConceptFamily::check_invariants() const {
  if (family_id.empty()) throw data_error("family: empty family_id");
  std::map<std::string, int> class_counts;
  for (const auto& it : items) {
    if (it.text.empty())
      throw data_error("family " + family_id + ": item with empty prompt");
    if (it.answer.empty())
      throw data_error("family " + family_id + ": item with empty answer");
    class_counts[it.class_label]++;
  }
  if (kind == FamilyKind::controlled_binary) {
    if (classes.size() != 2)
      throw data_error("family " + family_id +
                       ": controlled_binary requires exactly 2 classes");
    const int a = class_counts[classes[0]];
    const int b = class_counts[classes[1]];
    if (a == 0 || b == 0)
      throw data_error("family " + family_id + ": empty class");
    const double larger = double(std::max(a, b));
    if (double(std::abs(a - b)) > 0.10 * larger)
      throw data_error("family " + family_id + ": class sizes differ by more than 10% (" +
                       std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
  for (const auto& [cls, count] : class_counts) {
    if (std::find(classes.begin(), classes.end(), cls) == classes.end())
      throw data_error("family " + family_id + ": item class '" + cls +
                       "' not in class list");
    (void)count;
  }
}

std::pair<ConceptFamily, ValidationReport> validate_single_token(
    const ConceptFamily& family, const ModelHandle& model, TokenRule rule) {
  const Tokenizer& tok = model.tokenizer();
  ConceptFamily out = family;
  out.items.clear();
  ValidationReport report;

  for (const PromptItem& item : family.items) {
    PromptItem v = item;
    const std::vector<int> bare = tok.encode(item.answer);
    const std::vector<int> spaced = tok.encode(" " + item.answer);
    if (bare.size() == 1 && bare[0] != 0) {
      v.answer_token_id = bare[0];
      v.token_variant = "bare";
    } else if (spaced.size() == 1 && spaced[0] != 0) {
      v.answer_token_id = spaced[0];
      v.token_variant = "space";
    } else if (rule == TokenRule::last && spaced.size() == 2 &&
               tok.is_whitespace_token(spaced[0]) && spaced[1] != 0) {
      // digit-prefix tokenizers: [space marker, token] resolves to the token
      v.answer_token_id = spaced[1];
      v.token_variant = "space_last";
    } else if (rule == TokenRule::first) {
      // first-token proxy: first non-whitespace token of the spaced encoding
      int chosen = -1;
      for (int id : spaced) {
        if (id != 0 && !tok.is_whitespace_token(id)) {
          chosen = id;
          break;
        }
      }
      if (chosen >= 0) {
        v.answer_token_id = chosen;
        v.token_variant = "first_proxy";
      } else {
        report.exclusions.push_back(
            {item, "answer has no known non-whitespace token", bare, spaced});
        continue;
      }
    } else {
      report.exclusions.push_back(
          {item, "answer is multi-token under bare and leading-space encodings",
           bare, spaced});
      continue;
    }
    out.items.push_back(std::move(v));
  }

  report.kept = int(out.items.size());
  if (out.items.empty()) {
    std::string msg = "family " + family.family_id +
                      " empty after single-token validation; excluded:";
    for (const auto& e : report.exclusions) msg += " '" + e.item.answer + "'";
    throw data_error(msg);
  }
  out.validated = true;
  return {std::move(out), std::move(report)};
}

SteeringSpec select_steering_target(
    const ConceptFamily& family, const std::string& target,
    const std::function<bool(const PromptItem&)>& contamination_filter,
    const std::string& filter_note) {
  SteeringSpec spec;
  spec.family_id = family.family_id;
  spec.target_token = target;
  spec.filter_note = filter_note;

  bool target_seen = false;
  int filtered = 0;
  for (std::size_t i = 0; i < family.items.size(); ++i) {
    const PromptItem& item = family.items[i];
    if (item.answer == target) {
      target_seen = true;
      spec.target_items.push_back(int(i));
      if (spec.target_token_id < 0) spec.target_token_id = item.answer_token_id;
    } else {
      if (contamination_filter && contamination_filter(item)) {
        ++filtered;
        continue;
      }
      spec.nontarget_items.push_back(int(i));
    }
  }
  if (!target_seen)
    throw data_error("steering target '" + target + "' is not an answer in family " +
                     family.family_id);
  if (spec.target_items.empty())
    throw data_error("steering target split left zero target items in family " +
                     family.family_id);
  if (spec.nontarget_items.empty())
    throw data_error("steering target '" + target + "' matches every answer in family " +
                     family.family_id + "; no non-target items remain");
  if (filtered > 0 && spec.filter_note.empty())
    spec.filter_note = "contamination filter removed " + std::to_string(filtered) +
                       " non-target items";
  spec.small_target_warning = spec.n_target() < 10;
  return spec;
}

// ---- persistence --------------------------------------------------------------

void save_family(const ConceptFamily& family, const std::string& dir) {
  const fs::path root = fs::path(dir) / family.family_id;
  fs::create_directories(root);

  std::ofstream items(root / "items.jsonl", std::ios::trunc);
  if (!items) throw data_error("cannot write items.jsonl for " + family.family_id);
  for (const auto& it : family.items) {
    json j = {{"prompt", it.text}, {"answer", it.answer}, {"class", it.class_label}};
    items << j.dump() << "\n";
  }

  json meta = {{"family_id", family.family_id},
               {"kind", family_kind_name(family.kind)},
               {"classes", family.classes},
               {"templates", family.templates}};
  std::ofstream metaf(root / "family.json", std::ios::trunc);
  if (!metaf) throw data_error("cannot write family.json for " + family.family_id);
  metaf << meta.dump(2) << "\n";
}

ConceptFamily load_family_dir(const std::string& family_dir) {
  const fs::path root(family_dir);
  std::ifstream metaf(root / "family.json");
  if (!metaf) throw data_error("no family.json in " + family_dir);
  json meta;
  try {
    metaf >> meta;
  } catch (const json::exception& e) {
    throw data_error("bad family.json in " + family_dir + ": " + e.what());
  }

  ConceptFamily fam;
  fam.family_id = meta.at("family_id").get<std::string>();
  fam.kind = family_kind_from_name(meta.at("kind").get<std::string>());
  fam.classes = meta.at("classes").get<std::vector<std::string>>();
  fam.templates = meta.at("templates").get<std::vector<std::string>>();

  std::ifstream items(root / "items.jsonl");
  if (!items) throw data_error("no items.jsonl in " + family_dir);
  std::string line;
  int lineno = 0;
  while (std::getline(items, line)) {
    ++lineno;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw data_error("bad JSONL at " + family_dir + ":" + std::to_string(lineno) +
                       ": " + e.what());
    }
    PromptItem it;
    it.text = j.at("prompt").get<std::string>();
    it.answer = j.at("answer").get<std::string>();
    it.class_label = j.value("class", "");
    fam.items.push_back(std::move(it));
  }
  fam.check_invariants();
  return fam;
}

ConceptFamily load_family(const std::string& dir, const std::string& family_id) {
  return load_family_dir((fs::path(dir) / family_id).string());
}

std::string exclusion_report_json(const ValidationReport& report) {
  json arr = json::array();
  for (const auto& e : report.exclusions) {
    arr.push_back({{"item", {{"prompt", e.item.text}, {"answer", e.item.answer}}},
                   {"reason", e.reason},
                   {"encodings",
                    {{"bare", e.bare_encoding}, {"spaced", e.spaced_encoding}}}});
  }
  return arr.dump(2);
}

std::string default_data_dir() {
  if (const char* env = std::getenv("LAP_DATA_DIR")) return env;
#ifdef LAP_SOURCE_DATA_DIR
  return LAP_SOURCE_DATA_DIR;
#else
  return "data";
#endif
}

std::vector<ConceptFamily> builtin_core_families(const std::string& data_dir) {
  const fs::path root = fs::path(data_dir) / "families";
  std::vector<ConceptFamily> fams;
  for (const char* id : {"arithmetic", "geography", "sequence", "word_transform",
                         "analogy"})
    fams.push_back(load_family(root.string(), id));
  return fams;
}

std::vector<ConceptFamily> builtin_controlled_families(const std::string& data_dir) {
  const fs::path root = fs::path(data_dir) / "families";
  std::vector<ConceptFamily> fams;
  if (!fs::is_directory(root))
    throw data_error("no family data directory at " + root.string());
  std::vector<std::string> ids;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.rfind("c_", 0) == 0) ids.push_back(name);
  }
  std::sort(ids.begin(), ids.end());
  for (const auto& id : ids) fams.push_back(load_family(root.string(), id));
  return fams;
}

std::vector<std::string> load_unrelated_prompts(const std::string& data_dir) {
  const fs::path path = fs::path(data_dir) / "unrelated_prompts.json";
  std::ifstream in(path);
  if (!in) throw data_error("no unrelated prompt list at " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error("bad unrelated prompt list: " + std::string(e.what()));
  }
  return j.get<std::vector<std::string>>();
}

}  // namespace lap
