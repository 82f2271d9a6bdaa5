// Regenerates the versioned family data files under data/families and the
// unrelated-prompt list. Run from the repository root (or pass the data dir).

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lap/concepts.hpp"

int main(int argc, char** argv) {
  const std::string data_dir = argc > 1 ? argv[1] : lap::default_data_dir();
  const std::string fam_dir = (std::filesystem::path(data_dir) / "families").string();
  std::filesystem::create_directories(fam_dir);

  int written = 0;
  for (const auto& fam : lap::generate_core_families()) {
    lap::save_family(fam, fam_dir);
    std::printf("%-18s %5zu items\n", fam.family_id.c_str(), fam.items.size());
    ++written;
  }
  for (const auto& fam : lap::generate_controlled_families()) {
    lap::save_family(fam, fam_dir);
    std::printf("%-18s %5zu items\n", fam.family_id.c_str(), fam.items.size());
    ++written;
  }

  const char* prompts[] = {
      "The weather today is", "My favorite color is", "The meeting starts at",
      "She opened the door and", "The recipe calls for", "In the morning I like to",
      "The train was late because", "He looked at the sky and",
      "The store closes at", "A good book should", "The garden needs",
      "Yesterday we visited", "The movie was about", "Lunch will be served",
      "The children played", "Music helps me", "The bridge crosses",
      "Every winter the lake", "The letter began with", "Our neighbors have",
      "The museum displays", "Coffee tastes best when", "The road leads to",
      "His jacket was", "The lecture covered", "Dinner smelled like",
      "The boat drifted toward", "Rain fell on the", "The clock on the wall",
      "Her desk was covered in", "The market sells", "A stranger asked for",
      "The mountain trail was", "Birds gathered near the", "The engine made a",
      "School begins in", "The painting showed", "Wind moved through the",
      "The library keeps", "Breakfast usually includes", "The team practiced",
      "Snow covered the", "The phone rang while", "Light came through the",
      "The farmer planted", "Waves crashed against the", "The keys were left",
      "A candle burned on the", "The report concluded that", "Children laughed in the",
  };
  {
    std::ofstream out(std::filesystem::path(data_dir) / "unrelated_prompts.json",
                      std::ios::trunc);
    out << "[\n";
    const std::size_t n = std::size(prompts);
    for (std::size_t i = 0; i < n; ++i)
      out << "  \"" << prompts[i] << "\"" << (i + 1 < n ? "," : "") << "\n";
    out << "]\n";
  }
  std::printf("wrote %d families + unrelated prompts to %s\n", written,
              data_dir.c_str());
  return 0;
}
