#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "lap/error.hpp"
#include "lap/hash.hpp"
#include "lap/model.hpp"

namespace lap {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string layer_file_name(int layer) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "layer_%02d.bin", layer);
  return buf;
}

void write_file(const fs::path& path, const void* data, std::size_t bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw data_error("cannot write " + path.string());
  out.write(static_cast<const char*>(data), std::streamsize(bytes));
  if (!out) throw data_error("short write to " + path.string());
}

std::vector<char> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw data_error("cannot read " + path.string());
  const auto size = in.tellg();
  in.seekg(0);
  std::vector<char> buf((std::size_t(size)));
  in.read(buf.data(), size);
  if (!in) throw data_error("short read from " + path.string());
  return buf;
}

}  // namespace

void save_capture(const ActivationCapture& capture, const std::string& dir) {
  fs::create_directories(dir);
  json manifest;
  manifest["format_version"] = 1;
  manifest["model_id"] = capture.model_id;
  manifest["family_id"] = capture.family_id;
  manifest["position_policy"] = capture.position_policy;
  manifest["num_layers"] = capture.num_layers;
  manifest["hidden_dim"] = capture.hidden_dim;
  manifest["num_prompts"] = capture.num_prompts();
  manifest["seed"] = capture.manifest.seed;
  manifest["timestamp"] = capture.manifest.timestamp;
  manifest["backend_version"] = capture.manifest.backend_version;
  manifest["batch_size"] = capture.manifest.batch_size;
  manifest["answer_token_ids"] = capture.answer_token_ids;
  manifest["model_top1"] = capture.model_top1;

  json items = json::array();
  for (const auto& it : capture.items) {
    items.push_back({{"prompt", it.text},
                     {"answer", it.answer},
                     {"class", it.class_label},
                     {"answer_token_id", it.answer_token_id},
                     {"token_variant", it.token_variant}});
  }
  manifest["items"] = items;

  json errors = json::array();
  for (const auto& e : capture.errors)
    errors.push_back({{"prompt_index", e.prompt_index}, {"reason", e.reason}});
  manifest["errors"] = errors;

  json layer_files = json::array();
  for (int l = 0; l < capture.num_layers; ++l) {
    const auto& data = capture.states[std::size_t(l)];
    const std::string name = layer_file_name(l);
    write_file(fs::path(dir) / name, data.data(), data.size() * sizeof(float));
    layer_files.push_back(
        {{"file", name},
         {"checksum", hex64(fnv1a64(data.data(), data.size() * sizeof(float)))}});
  }
  manifest["layer_files"] = layer_files;

  std::ofstream out(fs::path(dir) / "manifest.json", std::ios::trunc);
  if (!out) throw data_error("cannot write capture manifest in " + dir);
  out << manifest.dump(2) << "\n";
}

ActivationCapture load_capture(const std::string& dir) {
  std::ifstream in(fs::path(dir) / "manifest.json");
  if (!in) throw data_error("no capture manifest in " + dir);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw data_error("bad capture manifest in " + dir + ": " + e.what());
  }

  ActivationCapture cap;
  cap.model_id = manifest.at("model_id").get<std::string>();
  cap.family_id = manifest.at("family_id").get<std::string>();
  cap.position_policy = manifest.at("position_policy").get<std::string>();
  cap.num_layers = manifest.at("num_layers").get<int>();
  cap.hidden_dim = manifest.at("hidden_dim").get<int>();
  cap.manifest.seed = manifest.at("seed").get<std::uint64_t>();
  cap.manifest.timestamp = manifest.at("timestamp").get<std::string>();
  cap.manifest.backend_version = manifest.at("backend_version").get<std::string>();
  cap.manifest.batch_size = manifest.at("batch_size").get<int>();
  cap.answer_token_ids = manifest.at("answer_token_ids").get<std::vector<int>>();
  cap.model_top1 = manifest.at("model_top1").get<std::vector<int>>();

  for (const auto& j : manifest.at("items")) {
    PromptItem it;
    it.text = j.at("prompt").get<std::string>();
    it.answer = j.at("answer").get<std::string>();
    it.class_label = j.at("class").get<std::string>();
    it.answer_token_id = j.at("answer_token_id").get<int>();
    it.token_variant = j.value("token_variant", "");
    cap.items.push_back(std::move(it));
  }
  for (const auto& j : manifest.at("errors"))
    cap.errors.push_back(
        {j.at("prompt_index").get<int>(), j.at("reason").get<std::string>()});

  const std::size_t n = cap.items.size();
  const auto layer_files = manifest.at("layer_files");
  if (int(layer_files.size()) != cap.num_layers)
    throw data_error("capture manifest layer count mismatch in " + dir);
  cap.states.assign(std::size_t(cap.num_layers), {});
  for (int l = 0; l < cap.num_layers; ++l) {
    const auto& entry = layer_files[std::size_t(l)];
    const std::string name = entry.at("file").get<std::string>();
    std::vector<char> bytes = read_file(fs::path(dir) / name);
    const std::string sum = hex64(fnv1a64(bytes.data(), bytes.size()));
    if (sum != entry.at("checksum").get<std::string>())
      throw data_error("checksum mismatch for " + name + " in " + dir);
    if (bytes.size() != n * std::size_t(cap.hidden_dim) * sizeof(float))
      throw data_error("unexpected size for " + name + " in " + dir);
    auto& dst = cap.states[std::size_t(l)];
    dst.resize(n * std::size_t(cap.hidden_dim));
    std::memcpy(dst.data(), bytes.data(), bytes.size());
  }
  return cap;
}

}  // namespace lap
