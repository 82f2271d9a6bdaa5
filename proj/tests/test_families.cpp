#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include "lap/concepts.hpp"
#include "lap/error.hpp"
#include "lap/reference_model.hpp"

using namespace lap;

namespace {

bool has_item(const ConceptFamily& fam, const std::string& text,
              const std::string& answer) {
  return std::any_of(fam.items.begin(), fam.items.end(), [&](const PromptItem& it) {
    return it.text == text && it.answer == answer;
  });
}

const ConceptFamily& find_family(const std::vector<ConceptFamily>& fams,
                                 const std::string& id) {
  for (const auto& f : fams)
    if (f.family_id == id) return f;
  throw std::runtime_error("missing family " + id);
}

}  // namespace

TEST_CASE("core families load from the shipped data") {
  std::vector<ConceptFamily> fams = builtin_core_families(default_data_dir());
  REQUIRE(fams.size() == 5);
  for (const auto& f : fams) {
    CHECK(f.kind == FamilyKind::core);
    CHECK(!f.items.empty());
    CHECK(!f.templates.empty());
    f.check_invariants();
    for (const auto& it : f.items) {
      CHECK(!it.text.empty());
      CHECK(!it.answer.empty());
    }
  }
  const ConceptFamily& arith = find_family(fams, "arithmetic");
  CHECK(has_item(arith, "2 + 5 = ", "7"));
  CHECK(has_item(arith, "15 - 8 = ", "7"));
  CHECK(has_item(arith, "3 * 3 = ", "9"));

  const ConceptFamily& analogy = find_family(fams, "analogy");
  CHECK(has_item(analogy, "hot is to cold as big is to", "small"));
  CHECK(has_item(analogy, "cold is to hot as small is to", "big"));

  const ConceptFamily& seq = find_family(fams, "sequence");
  CHECK(has_item(seq, "Monday, Tuesday, Wednesday,", "Thursday"));
  const ConceptFamily& geo = find_family(fams, "geography");
  CHECK(has_item(geo, "Paris is the capital of", "France"));
  const ConceptFamily& wt = find_family(fams, "word_transform");
  CHECK(has_item(wt, "The opposite of hot is", "cold"));
}

TEST_CASE("core family sizes are of the published order") {
  const std::map<std::string, int> expected = {{"arithmetic", 831},
                                               {"geography", 564},
                                               {"sequence", 433},
                                               {"word_transform", 506},
                                               {"analogy", 348}};
  std::vector<ConceptFamily> fams = builtin_core_families(default_data_dir());
  for (const auto& [id, n] : expected) {
    const ConceptFamily& f = find_family(fams, id);
    CHECK(double(f.items.size()) >= 0.5 * n);
    CHECK(double(f.items.size()) <= 1.5 * n);
  }
}

TEST_CASE("the 25 controlled binary families match the published class pairs") {
  std::vector<ConceptFamily> fams = builtin_controlled_families(default_data_dir());
  REQUIRE(fams.size() == 25);

  const std::map<std::string, std::tuple<std::string, std::string, int>> table = {
      {"c_gender", {"he", "she", 192}},
      {"c_plant", {"plant", "animal", 176}},
      {"c_animal", {"mammal", "bird", 200}},
      {"c_continent", {"Europe", "Asia", 180}},
      {"c_material", {"metal", "wood", 176}},
      {"c_parity", {"even", "odd", 294}},
      {"c_phase", {"solid", "liquid", 176}},
      {"c_taste", {"sweet", "sour", 176}},
      {"c_plural", {"singular", "plural", 176}},
      {"c_daynight", {"day", "night", 176}},
      {"c_sentiment", {"positive", "negative", 176}},
      {"c_temperature", {"hot", "cold", 176}},
      {"c_size", {"big", "small", 176}},
      {"c_speed", {"fast", "slow", 176}},
      {"c_hardness", {"hard", "soft", 176}},
      {"c_indoor", {"indoor", "outdoor", 176}},
      {"c_moisture", {"wet", "dry", 176}},
      {"c_volume", {"loud", "quiet", 176}},
      {"c_habitat", {"land", "water", 176}},
      {"c_shape", {"round", "flat", 176}},
      {"c_weight", {"heavy", "light", 176}},
      {"c_age", {"ancient", "modern", 176}},
      {"c_danger", {"dangerous", "safe", 176}},
      {"c_edible", {"edible", "inedible", 184}},
      {"c_natural", {"natural", "artificial", 176}},
  };
  REQUIRE(table.size() == 25);
  for (const auto& [id, spec] : table) {
    const auto& [class_a, class_b, n] = spec;
    const ConceptFamily& f = find_family(fams, id);
    CHECK(f.kind == FamilyKind::controlled_binary);
    REQUIRE(f.classes.size() == 2);
    CHECK(f.classes[0] == class_a);
    CHECK(f.classes[1] == class_b);
    // N within 10% of the published count
    CHECK(std::fabs(double(f.items.size()) - n) <= 0.10 * n);
    // answers are the class tokens and classes are balanced exactly
    int count_a = 0, count_b = 0;
    for (const auto& it : f.items) {
      CHECK((it.answer == class_a || it.answer == class_b));
      CHECK(it.answer == it.class_label);
      (it.answer == class_a ? count_a : count_b)++;
    }
    CHECK(count_a == count_b);
    f.check_invariants();
  }
}

TEST_CASE("data files are in sync with the generators") {
  std::vector<ConceptFamily> shipped_core = builtin_core_families(default_data_dir());
  std::vector<ConceptFamily> generated_core = generate_core_families();
  REQUIRE(shipped_core.size() == generated_core.size());
  for (std::size_t i = 0; i < shipped_core.size(); ++i) {
    CHECK(shipped_core[i].family_id == generated_core[i].family_id);
    CHECK(shipped_core[i].items == generated_core[i].items);
    CHECK(shipped_core[i].classes == generated_core[i].classes);
  }
  std::vector<ConceptFamily> shipped_ctrl =
      builtin_controlled_families(default_data_dir());
  std::vector<ConceptFamily> generated_ctrl = generate_controlled_families();
  std::sort(generated_ctrl.begin(), generated_ctrl.end(),
            [](const auto& a, const auto& b) { return a.family_id < b.family_id; });
  REQUIRE(shipped_ctrl.size() == generated_ctrl.size());
  for (std::size_t i = 0; i < shipped_ctrl.size(); ++i) {
    CHECK(shipped_ctrl[i].family_id == generated_ctrl[i].family_id);
    CHECK(shipped_ctrl[i].items == generated_ctrl[i].items);
  }
}

TEST_CASE("save and load round-trip a family field for field") {
  ConceptFamily fam = generate_controlled_families()[0];
  const std::string dir =
      (std::filesystem::temp_directory_path() / "lap_family_roundtrip").string();
  std::filesystem::remove_all(dir);
  save_family(fam, dir);
  ConceptFamily loaded = load_family(dir, fam.family_id);
  CHECK(loaded.family_id == fam.family_id);
  CHECK(loaded.kind == fam.kind);
  CHECK(loaded.classes == fam.classes);
  CHECK(loaded.templates == fam.templates);
  REQUIRE(loaded.items.size() == fam.items.size());
  for (std::size_t i = 0; i < fam.items.size(); ++i) {
    CHECK(loaded.items[i].text == fam.items[i].text);
    CHECK(loaded.items[i].answer == fam.items[i].answer);
    CHECK(loaded.items[i].class_label == fam.items[i].class_label);
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("controlled-binary invariants reject broken families") {
  ConceptFamily fam;
  fam.family_id = "broken";
  fam.kind = FamilyKind::controlled_binary;
  fam.classes = {"a", "b"};
  for (int i = 0; i < 20; ++i) fam.items.push_back({"p", "a", "a", -1, ""});
  fam.items.push_back({"p", "b", "b", -1, ""});
  CHECK_THROWS_AS(fam.check_invariants(), Error);  // 20 vs 1 imbalance

  ConceptFamily empty_answer;
  empty_answer.family_id = "x";
  empty_answer.classes = {"a"};
  empty_answer.items.push_back({"p", "", "a", -1, ""});
  CHECK_THROWS_AS(empty_answer.check_invariants(), Error);
}

TEST_CASE("class-token steering split reproduces the class partition") {
  ReferenceModelConfig cfg;
  cfg.num_layers = 4;
  cfg.writer_layer = 2;
  ModelHandle model = build_reference_model(cfg);
  auto [fam, rep] = validate_single_token(reference_planted_family(cfg), model);
  REQUIRE(fam.kind == FamilyKind::controlled_binary);
  SteeringSpec spec = select_steering_target(fam, fam.classes[1]);
  for (int idx : spec.target_items)
    CHECK(fam.items[std::size_t(idx)].class_label == fam.classes[1]);
  for (int idx : spec.nontarget_items)
    CHECK(fam.items[std::size_t(idx)].class_label == fam.classes[0]);
  CHECK(spec.n_target() + spec.n_nontarget() == int(fam.items.size()));
}

TEST_CASE("family loading reports malformed inputs") {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "lap_family_errors";
  fs::remove_all(root);

  // missing family.json
  fs::create_directories(root / "no_meta");
  CHECK_THROWS_AS(load_family_dir((root / "no_meta").string()), Error);

  // malformed JSONL line
  fs::create_directories(root / "bad_items");
  {
    std::ofstream meta(root / "bad_items" / "family.json");
    meta << R"({"family_id": "bad_items", "kind": "custom", "classes": ["c"],)"
         << R"( "templates": []})";
    std::ofstream items(root / "bad_items" / "items.jsonl");
    items << R"({"prompt": "ok", "answer": "x", "class": "c"})" << "\n";
    items << "not json at all\n";
  }
  CHECK_THROWS_AS(load_family_dir((root / "bad_items").string()), Error);

  // unknown kind string
  fs::create_directories(root / "bad_kind");
  {
    std::ofstream meta(root / "bad_kind" / "family.json");
    meta << R"({"family_id": "bad_kind", "kind": "exotic", "classes": ["c"],)"
         << R"( "templates": []})";
    std::ofstream items(root / "bad_kind" / "items.jsonl");
    items << R"({"prompt": "ok", "answer": "x", "class": "c"})" << "\n";
  }
  CHECK_THROWS_AS(load_family_dir((root / "bad_kind").string()), Error);
  fs::remove_all(root);
}

TEST_CASE("unrelated prompts load and stay clear of family texts") {
  std::vector<std::string> prompts = load_unrelated_prompts(default_data_dir());
  CHECK(prompts.size() == 50);
  std::vector<ConceptFamily> fams = builtin_core_families(default_data_dir());
  for (const auto& f : fams)
    for (const auto& it : f.items)
      CHECK(std::find(prompts.begin(), prompts.end(), it.text) == prompts.end());
}
