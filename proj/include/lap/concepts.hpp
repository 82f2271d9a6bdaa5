#pragma once
// Concept families: labeled prompt/answer pairs with class structure, plus
// tokenizer validation and steering-target splits.

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lap {

class ModelHandle;

struct PromptItem {
  std::string text;
  std::string answer;
  std::string class_label;
  int answer_token_id = -1;       // filled by validate_single_token
  std::string token_variant;      // which encoding matched: bare|space|space_last|first_proxy

  bool operator==(const PromptItem&) const = default;
};

enum class FamilyKind { core, controlled_binary, custom };

const char* family_kind_name(FamilyKind k);
FamilyKind family_kind_from_name(const std::string& name);

struct ConceptFamily {
  std::string family_id;
  FamilyKind kind = FamilyKind::custom;
  std::vector<PromptItem> items;
  std::vector<std::string> classes;
  std::vector<std::string> templates;
  bool validated = false;

  // Schema + class-structure checks; throws data_error on violation.
  void check_invariants() const;
};

// One excluded item and why.
struct ExclusionRecord {
  PromptItem item;
  std::string reason;
  std::vector<int> bare_encoding;
  std::vector<int> spaced_encoding;
};

struct ValidationReport {
  std::vector<ExclusionRecord> exclusions;
  int kept = 0;
};

enum class TokenRule { first, last };

// Resolve every answer to a single vocabulary token. Tries the bare answer,
// then the leading-space variant. Under TokenRule::last, a two-token spaced
// encoding whose first token is pure whitespace resolves to its second token
// (digit-prefix tokenizers). Under TokenRule::first, a still-multi-token
// answer resolves to its first non-whitespace token (first-token proxy).
// Anything unresolved is excluded and reported.
std::pair<ConceptFamily, ValidationReport> validate_single_token(
    const ConceptFamily& family, const ModelHandle& model,
    TokenRule rule = TokenRule::last);

struct SteeringSpec {
  std::string family_id;
  std::string target_token;
  int target_token_id = -1;
  std::vector<int> target_items;     // indices into the family's item list
  std::vector<int> nontarget_items;
  std::string filter_note;
  bool small_target_warning = false;  // n_target < 10

  int n_target() const { return int(target_items.size()); }
  int n_nontarget() const { return int(nontarget_items.size()); }
};

// Split a validated family into target / non-target items for steering.
// The optional contamination filter drops non-target items it matches
// (e.g. prompts whose operands contain the target digit).
SteeringSpec select_steering_target(
    const ConceptFamily& family, const std::string& target,
    const std::function<bool(const PromptItem&)>& contamination_filter = nullptr,
    const std::string& filter_note = "");

// ---- builtin families -------------------------------------------------------

// Versioned data files under <data_dir>/families. The generators below
// produce exactly these families; the files exist so results do not depend
// on generator drift.
std::vector<ConceptFamily> builtin_core_families(const std::string& data_dir);
std::vector<ConceptFamily> builtin_controlled_families(const std::string& data_dir);

// Deterministic generators used to (re)create the data files.
std::vector<ConceptFamily> generate_core_families();
std::vector<ConceptFamily> generate_controlled_families();

// Fixed list of generic completion prompts used for collateral measurement.
std::vector<std::string> load_unrelated_prompts(const std::string& data_dir);

// ---- persistence ------------------------------------------------------------

// Layout: <dir>/<family_id>/items.jsonl (one {"prompt","answer","class"} per
// line) and <dir>/<family_id>/family.json (id, kind, classes, templates).
void save_family(const ConceptFamily& family, const std::string& dir);
ConceptFamily load_family_dir(const std::string& family_dir);
ConceptFamily load_family(const std::string& dir, const std::string& family_id);

std::string exclusion_report_json(const ValidationReport& report);

// Root of the shipped data files: LAP_DATA_DIR if set, else the compiled-in
// source-tree default.
std::string default_data_dir();

}  // namespace lap
