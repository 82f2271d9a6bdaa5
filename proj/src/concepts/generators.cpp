// Deterministic generators for the builtin concept families. The shipped
// data files under data/families are produced by these; loading the files is
// the normal path, the generators exist to regenerate them.

#include <string>
#include <vector>

#include "lap/concepts.hpp"

namespace lap {

namespace {

void add(ConceptFamily& fam, std::string text, std::string answer,
         std::string cls) {
  fam.items.push_back({std::move(text), std::move(answer), std::move(cls), -1, ""});
}

std::string subst(const std::string& tmpl, const std::string& item) {
  const std::size_t pos = tmpl.find("{}");
  if (pos == std::string::npos) return tmpl;
  return tmpl.substr(0, pos) + item + tmpl.substr(pos + 2);
}

// ---- core: arithmetic ----------------------------------------------------------

ConceptFamily gen_arithmetic() {
  ConceptFamily fam;
  fam.family_id = "arithmetic";
  fam.kind = FamilyKind::core;
  fam.classes = {"addition", "subtraction", "multiplication"};
  fam.templates = {"{a} + {b} = ", "{a} - {b} = ", "{a} * {b} = "};
  for (int a = 0; a <= 20; ++a)
    for (int b = 0; b <= 20; ++b)
      if (a + b <= 30)
        add(fam, std::to_string(a) + " + " + std::to_string(b) + " = ",
            std::to_string(a + b), "addition");
  for (int a = 0; a <= 24; ++a)
    for (int b = 0; b <= a; ++b)
      add(fam, std::to_string(a) + " - " + std::to_string(b) + " = ",
          std::to_string(a - b), "subtraction");
  for (int a = 2; a <= 12; ++a)
    for (int b = 2; b <= 12; ++b)
      if (a * b <= 100)
        add(fam, std::to_string(a) + " * " + std::to_string(b) + " = ",
            std::to_string(a * b), "multiplication");
  return fam;
}

// ---- core: geography -------------------------------------------------------------

struct CountryRow {
  const char* country;
  const char* capital;
  const char* continent;
  const char* language;  // empty: skipped for language prompts
};

const CountryRow kCountries[] = {
    {"France", "Paris", "Europe", "French"},
    {"Germany", "Berlin", "Europe", "German"},
    {"Spain", "Madrid", "Europe", "Spanish"},
    {"Italy", "Rome", "Europe", "Italian"},
    {"Portugal", "Lisbon", "Europe", "Portuguese"},
    {"Greece", "Athens", "Europe", "Greek"},
    {"Austria", "Vienna", "Europe", "German"},
    {"Poland", "Warsaw", "Europe", "Polish"},
    {"Norway", "Oslo", "Europe", "Norwegian"},
    {"Sweden", "Stockholm", "Europe", "Swedish"},
    {"Finland", "Helsinki", "Europe", "Finnish"},
    {"Denmark", "Copenhagen", "Europe", "Danish"},
    {"Ireland", "Dublin", "Europe", "English"},
    {"Iceland", "Reykjavik", "Europe", "Icelandic"},
    {"Hungary", "Budapest", "Europe", "Hungarian"},
    {"Romania", "Bucharest", "Europe", "Romanian"},
    {"Bulgaria", "Sofia", "Europe", "Bulgarian"},
    {"Croatia", "Zagreb", "Europe", "Croatian"},
    {"Serbia", "Belgrade", "Europe", "Serbian"},
    {"Ukraine", "Kyiv", "Europe", "Ukrainian"},
    {"Russia", "Moscow", "Europe", "Russian"},
    {"Belgium", "Brussels", "Europe", ""},
    {"Netherlands", "Amsterdam", "Europe", "Dutch"},
    {"Switzerland", "Bern", "Europe", ""},
    {"Czechia", "Prague", "Europe", "Czech"},
    {"Slovakia", "Bratislava", "Europe", "Slovak"},
    {"Slovenia", "Ljubljana", "Europe", "Slovenian"},
    {"Albania", "Tirana", "Europe", "Albanian"},
    {"Estonia", "Tallinn", "Europe", "Estonian"},
    {"Latvia", "Riga", "Europe", "Latvian"},
    {"Lithuania", "Vilnius", "Europe", "Lithuanian"},
    {"Japan", "Tokyo", "Asia", "Japanese"},
    {"China", "Beijing", "Asia", "Chinese"},
    {"India", "Delhi", "Asia", "Hindi"},
    {"Thailand", "Bangkok", "Asia", "Thai"},
    {"Vietnam", "Hanoi", "Asia", "Vietnamese"},
    {"Indonesia", "Jakarta", "Asia", "Indonesian"},
    {"Malaysia", "Kuala Lumpur", "Asia", "Malay"},
    {"Mongolia", "Ulaanbaatar", "Asia", "Mongolian"},
    {"Nepal", "Kathmandu", "Asia", "Nepali"},
    {"Pakistan", "Islamabad", "Asia", "Urdu"},
    {"Iran", "Tehran", "Asia", "Persian"},
    {"Iraq", "Baghdad", "Asia", "Arabic"},
    {"Israel", "Jerusalem", "Asia", "Hebrew"},
    {"Turkey", "Ankara", "Asia", "Turkish"},
    {"Cambodia", "Phnom Penh", "Asia", "Khmer"},
    {"Laos", "Vientiane", "Asia", "Lao"},
    {"Philippines", "Manila", "Asia", "Filipino"},
    {"Singapore", "Singapore", "Asia", ""},
    {"Egypt", "Cairo", "Africa", "Arabic"},
    {"Kenya", "Nairobi", "Africa", "Swahili"},
    {"Nigeria", "Abuja", "Africa", "English"},
    {"Ethiopia", "Addis Ababa", "Africa", "Amharic"},
    {"Morocco", "Rabat", "Africa", "Arabic"},
    {"Ghana", "Accra", "Africa", "English"},
    {"Senegal", "Dakar", "Africa", "French"},
    {"Tanzania", "Dodoma", "Africa", "Swahili"},
    {"Canada", "Ottawa", "America", "English"},
    {"Mexico", "Mexico City", "America", "Spanish"},
    {"Brazil", "Brasilia", "America", "Portuguese"},
    {"Argentina", "Buenos Aires", "America", "Spanish"},
    {"Chile", "Santiago", "America", "Spanish"},
    {"Peru", "Lima", "America", "Spanish"},
    {"Colombia", "Bogota", "America", "Spanish"},
    {"Cuba", "Havana", "America", "Spanish"},
    {"Australia", "Canberra", "Oceania", "English"},
    {"Georgia", "Tbilisi", "Asia", "Georgian"},
    {"Armenia", "Yerevan", "Asia", "Armenian"},
    {"Azerbaijan", "Baku", "Asia", "Azerbaijani"},
    {"Kazakhstan", "Astana", "Asia", "Kazakh"},
    {"Uzbekistan", "Tashkent", "Asia", "Uzbek"},
    {"Qatar", "Doha", "Asia", "Arabic"},
    {"Bahrain", "Manama", "Asia", "Arabic"},
    {"Afghanistan", "Kabul", "Asia", "Pashto"},
    {"Sudan", "Khartoum", "Africa", "Arabic"},
    {"Libya", "Tripoli", "Africa", "Arabic"},
    {"Algeria", "Algiers", "Africa", "Arabic"},
    {"Tunisia", "Tunis", "Africa", "Arabic"},
    {"Uganda", "Kampala", "Africa", "English"},
    {"Zambia", "Lusaka", "Africa", "English"},
    {"Zimbabwe", "Harare", "Africa", "English"},
    {"Botswana", "Gaborone", "Africa", "English"},
    {"Namibia", "Windhoek", "Africa", "English"},
    {"Venezuela", "Caracas", "America", "Spanish"},
    {"Ecuador", "Quito", "America", "Spanish"},
    {"Uruguay", "Montevideo", "America", "Spanish"},
    {"Paraguay", "Asuncion", "America", "Spanish"},
    {"Jamaica", "Kingston", "America", "English"},
};

struct CityRow {
  const char* city;
  const char* country;
};

const CityRow kCities[] = {
    {"Munich", "Germany"},    {"Hamburg", "Germany"},  {"Lyon", "France"},
    {"Marseille", "France"},  {"Barcelona", "Spain"},  {"Seville", "Spain"},
    {"Milan", "Italy"},       {"Naples", "Italy"},     {"Porto", "Portugal"},
    {"Krakow", "Poland"},     {"Bergen", "Norway"},    {"Gothenburg", "Sweden"},
    {"Osaka", "Japan"},       {"Kyoto", "Japan"},      {"Shanghai", "China"},
    {"Shenzhen", "China"},    {"Mumbai", "India"},     {"Chennai", "India"},
    {"Istanbul", "Turkey"},   {"Izmir", "Turkey"},     {"Toronto", "Canada"},
    {"Vancouver", "Canada"},  {"Chicago", "America"},  {"Houston", "America"},
    {"Guadalajara", "Mexico"},{"Salvador", "Brazil"},  {"Cordoba", "Argentina"},
    {"Valparaiso", "Chile"},  {"Arequipa", "Peru"},    {"Medellin", "Colombia"},
    {"Sydney", "Australia"},  {"Melbourne", "Australia"}, {"Alexandria", "Egypt"},
    {"Mombasa", "Kenya"},     {"Lagos", "Nigeria"},    {"Casablanca", "Morocco"},
    {"Kumasi", "Ghana"},      {"Busan", "Korea"},      {"Hue", "Vietnam"},
    {"Chiangmai", "Thailand"},
};

struct LandmarkRow {
  const char* landmark;
  const char* city;
};

const LandmarkRow kLandmarks[] = {
    {"The Eiffel Tower", "Paris"},      {"Big Ben", "London"},
    {"The Colosseum", "Rome"},          {"The Kremlin", "Moscow"},
    {"The Parthenon", "Athens"},        {"The Brandenburg Gate", "Berlin"},
    {"The Sagrada Familia", "Barcelona"}, {"The Louvre", "Paris"},
    {"The Alhambra", "Granada"},        {"The Blue Mosque", "Istanbul"},
    {"The Forbidden City", "Beijing"},  {"The Taj Mahal", "Agra"},
    {"The Space Needle", "Seattle"},    {"The Hollywood Sign", "Hollywood"},
    {"The Opera House", "Sydney"},      {"Christ the Redeemer", "Rio"},
    {"The Charles Bridge", "Prague"},   {"The Little Mermaid", "Copenhagen"},
    {"The Atomium", "Brussels"},        {"The Rialto Bridge", "Venice"},
    {"The Acropolis", "Athens"},        {"The Hermitage", "Petersburg"},
    {"The Burj Khalifa", "Dubai"},      {"The Marina Bay Sands", "Singapore"},
    {"The Tower Bridge", "London"},     {"The Duomo", "Milan"},
    {"The Guggenheim", "Bilbao"},       {"The Wawel Castle", "Krakow"},
    {"Senso-ji", "Tokyo"},              {"The Gyeongbokgung Palace", "Seoul"},
};

ConceptFamily gen_geography() {
  ConceptFamily fam;
  fam.family_id = "geography";
  fam.kind = FamilyKind::core;
  fam.classes = {"capital", "country", "continent", "language", "city"};
  fam.templates = {"{capital} is the capital of", "The capital of {country} is",
                   "{country} is located in", "{country} is a country in",
                   "In {country}, people speak",
                   "The official language of {country} is", "{city} is a city in",
                   "{landmark} is located in"};
  for (const auto& row : kCountries) {
    add(fam, std::string(row.capital) + " is the capital of", row.country, "country");
    add(fam, "The capital of " + std::string(row.country) + " is", row.capital,
        "capital");
    add(fam, std::string(row.country) + " is located in", row.continent, "continent");
    add(fam, std::string(row.country) + " is a country in", row.continent,
        "continent");
    if (row.language[0] != '\0') {
      add(fam, "In " + std::string(row.country) + ", people speak", row.language,
          "language");
      add(fam, "The official language of " + std::string(row.country) + " is",
          row.language, "language");
    }
  }
  for (const auto& row : kCities)
    add(fam, std::string(row.city) + " is a city in", row.country, "country");
  for (const auto& row : kLandmarks)
    add(fam, std::string(row.landmark) + " is located in", row.city, "city");
  return fam;
}

// ---- core: sequence ---------------------------------------------------------------

ConceptFamily gen_sequence() {
  ConceptFamily fam;
  fam.family_id = "sequence";
  fam.kind = FamilyKind::core;
  fam.classes = {"days", "months", "alphabet", "numbers"};
  fam.templates = {"{a}, {b}, {c},", "{a}, {b}, {c}, {d},"};

  const std::vector<std::string> days = {"Monday",    "Tuesday", "Wednesday",
                                         "Thursday",  "Friday",  "Saturday",
                                         "Sunday"};
  const std::vector<std::string> months = {"January",   "February", "March",
                                           "April",     "May",      "June",
                                           "July",      "August",   "September",
                                           "October",   "November", "December"};
  std::vector<std::string> letters;
  for (char c = 'a'; c <= 'z'; ++c) letters.push_back(std::string(1, c));

  auto windows = [&](const std::vector<std::string>& seq, bool cyclic,
                     const std::string& cls) {
    const int n = int(seq.size());
    for (int w = 3; w <= 5; ++w) {
      const int starts = cyclic ? n : n - w;
      for (int s = 0; s < starts; ++s) {
        std::string text;
        for (int i = 0; i < w; ++i) {
          if (i) text += " ";
          text += seq[std::size_t((s + i) % n)] + ",";
        }
        add(fam, text, seq[std::size_t((s + w) % n)], cls);
      }
    }
  };
  windows(days, true, "days");
  windows(months, true, "months");
  windows(letters, false, "alphabet");

  auto numeric = [&](int start_lo, int start_hi, int step, int w) {
    for (int s = start_lo; s <= start_hi; ++s) {
      std::string text;
      for (int i = 0; i < w; ++i) {
        if (i) text += " ";
        text += std::to_string(s + i * step) + ",";
      }
      add(fam, text, std::to_string(s + w * step), "numbers");
    }
  };
  numeric(1, 100, 1, 3);
  numeric(1, 100, 1, 4);
  for (int s = 1; s <= 60; ++s) numeric(s, s, 2, 3);
  for (int s = 5; s <= 100; s += 5) numeric(s, s, 5, 3);
  for (int s = 10; s <= 100; s += 10) numeric(s, s, 10, 3);
  return fam;
}

// ---- core: word transform -----------------------------------------------------------

struct PairRow {
  const char* a;
  const char* b;
};

const PairRow kOpposites[] = {
    {"hot", "cold"},        {"big", "small"},      {"fast", "slow"},
    {"tall", "short"},      {"light", "dark"},     {"happy", "sad"},
    {"early", "late"},      {"hard", "soft"},      {"heavy", "light"},
    {"strong", "weak"},     {"rich", "poor"},      {"young", "old"},
    {"wet", "dry"},         {"clean", "dirty"},    {"loud", "quiet"},
    {"full", "empty"},      {"open", "closed"},    {"high", "low"},
    {"wide", "narrow"},     {"deep", "shallow"},   {"thick", "thin"},
    {"sharp", "dull"},      {"smooth", "rough"},   {"sweet", "bitter"},
    {"brave", "cowardly"},  {"generous", "stingy"},{"easy", "difficult"},
    {"near", "far"},        {"inside", "outside"}, {"up", "down"},
    {"left", "right"},      {"true", "false"},     {"win", "lose"},
    {"buy", "sell"},        {"give", "take"},      {"push", "pull"},
    {"begin", "end"},       {"love", "hate"},      {"day", "night"},
    {"friend", "enemy"},    {"always", "never"},   {"more", "less"},
    {"first", "last"},      {"north", "south"},    {"east", "west"},
    {"wild", "tame"},       {"safe", "dangerous"}, {"ancient", "modern"},
    {"visible", "invisible"},{"awake", "asleep"},  {"alive", "dead"},
    {"bright", "dim"},      {"tight", "loose"},    {"sour", "sweet"},
    {"fat", "thin"},
};

const PairRow kPlurals[] = {
    {"child", "children"}, {"man", "men"},        {"woman", "women"},
    {"foot", "feet"},      {"tooth", "teeth"},    {"mouse", "mice"},
    {"goose", "geese"},    {"person", "people"},  {"ox", "oxen"},
    {"cat", "cats"},       {"dog", "dogs"},       {"house", "houses"},
    {"car", "cars"},       {"tree", "trees"},     {"book", "books"},
    {"city", "cities"},    {"baby", "babies"},    {"story", "stories"},
    {"party", "parties"},  {"lady", "ladies"},    {"wolf", "wolves"},
    {"leaf", "leaves"},    {"knife", "knives"},   {"life", "lives"},
    {"shelf", "shelves"},  {"wife", "wives"},     {"half", "halves"},
    {"box", "boxes"},      {"bus", "buses"},      {"glass", "glasses"},
    {"dish", "dishes"},    {"watch", "watches"},  {"church", "churches"},
    {"fox", "foxes"},      {"potato", "potatoes"},{"tomato", "tomatoes"},
    {"hero", "heroes"},    {"echo", "echoes"},    {"bird", "birds"},
    {"horse", "horses"},   {"table", "tables"},   {"chair", "chairs"},
    {"river", "rivers"},   {"mountain", "mountains"}, {"flower", "flowers"},
    {"song", "songs"},     {"road", "roads"},     {"train", "trains"},
    {"ship", "ships"},     {"stone", "stones"},   {"cloud", "clouds"},
    {"star", "stars"},     {"apple", "apples"},   {"window", "windows"},
    {"door", "doors"},     {"garden", "gardens"}, {"school", "schools"},
    {"teacher", "teachers"}, {"student", "students"}, {"doctor", "doctors"},
    {"farmer", "farmers"}, {"king", "kings"},     {"queen", "queens"},
    {"island", "islands"}, {"bridge", "bridges"}, {"letter", "letters"},
    {"ticket", "tickets"}, {"bottle", "bottles"}, {"basket", "baskets"},
    {"candle", "candles"},
};

const PairRow kPastTense[] = {
    {"go", "went"},     {"see", "saw"},     {"eat", "ate"},
    {"run", "ran"},     {"come", "came"},   {"take", "took"},
    {"give", "gave"},   {"find", "found"},  {"think", "thought"},
    {"bring", "brought"},{"buy", "bought"}, {"catch", "caught"},
    {"teach", "taught"},{"fight", "fought"},{"seek", "sought"},
    {"sing", "sang"},   {"ring", "rang"},   {"drink", "drank"},
    {"swim", "swam"},   {"begin", "began"}, {"speak", "spoke"},
    {"break", "broke"}, {"choose", "chose"},{"drive", "drove"},
    {"ride", "rode"},   {"rise", "rose"},   {"write", "wrote"},
    {"wake", "woke"},   {"steal", "stole"}, {"freeze", "froze"},
    {"fly", "flew"},    {"blow", "blew"},   {"grow", "grew"},
    {"know", "knew"},   {"throw", "threw"}, {"draw", "drew"},
    {"fall", "fell"},   {"feel", "felt"},   {"keep", "kept"},
    {"sleep", "slept"}, {"sweep", "swept"}, {"weep", "wept"},
    {"leave", "left"},  {"lose", "lost"},   {"meet", "met"},
    {"send", "sent"},   {"spend", "spent"}, {"build", "built"},
    {"lend", "lent"},   {"bend", "bent"},   {"stand", "stood"},
    {"understand", "understood"}, {"hold", "held"}, {"tell", "told"},
    {"sell", "sold"},   {"say", "said"},    {"pay", "paid"},
    {"lay", "laid"},    {"hear", "heard"},  {"make", "made"},
    {"sit", "sat"},     {"win", "won"},     {"shine", "shone"},
    {"shoot", "shot"},  {"get", "got"},     {"forget", "forgot"},
    {"bite", "bit"},    {"hide", "hid"},    {"slide", "slid"},
    {"walk", "walked"},
};

ConceptFamily gen_word_transform() {
  ConceptFamily fam;
  fam.family_id = "word_transform";
  fam.kind = FamilyKind::core;
  fam.classes = {"opposite", "plural", "past_tense"};
  fam.templates = {"The opposite of {} is", "The antonym of {} is",
                   "The plural of {} is", "One {}, two",
                   "The past tense of {} is", "Today I {}, yesterday I"};
  for (const auto& p : kOpposites) {
    add(fam, "The opposite of " + std::string(p.a) + " is", p.b, "opposite");
    add(fam, "The opposite of " + std::string(p.b) + " is", p.a, "opposite");
    add(fam, "The antonym of " + std::string(p.a) + " is", p.b, "opposite");
    add(fam, "The antonym of " + std::string(p.b) + " is", p.a, "opposite");
  }
  for (const auto& p : kPlurals) {
    add(fam, "The plural of " + std::string(p.a) + " is", p.b, "plural");
    add(fam, "One " + std::string(p.a) + ", two", p.b, "plural");
  }
  for (const auto& p : kPastTense) {
    add(fam, "The past tense of " + std::string(p.a) + " is", p.b, "past_tense");
    add(fam, "Today I " + std::string(p.a) + ", yesterday I", p.b, "past_tense");
  }
  return fam;
}

// ---- core: analogy ---------------------------------------------------------------

ConceptFamily gen_analogy() {
  ConceptFamily fam;
  fam.family_id = "analogy";
  fam.kind = FamilyKind::core;
  fam.classes = {"forward", "reverse"};
  fam.templates = {"{a1} is to {a2} as {b1} is to",
                   "{a2} is to {a1} as {b2} is to"};
  const PairRow pairs[] = {
      {"hot", "cold"},   {"big", "small"},   {"fast", "slow"},
      {"up", "down"},    {"day", "night"},   {"light", "dark"},
      {"happy", "sad"},  {"young", "old"},   {"tall", "short"},
      {"wet", "dry"},    {"loud", "quiet"},  {"hard", "soft"},
      {"rich", "poor"},  {"strong", "weak"},
  };
  const int n = int(std::size(pairs));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      add(fam,
          std::string(pairs[i].a) + " is to " + pairs[i].b + " as " + pairs[j].a +
              " is to",
          pairs[j].b, "forward");
      add(fam,
          std::string(pairs[i].b) + " is to " + pairs[i].a + " as " + pairs[j].b +
              " is to",
          pairs[j].a, "reverse");
    }
  }
  return fam;
}

// ---- controlled binary families -----------------------------------------------------

struct ControlledDef {
  std::string family_id;
  std::string class_a;
  std::string class_b;
  std::vector<std::string> items_a;
  std::vector<std::string> items_b;
  std::vector<std::string> templates;  // {} is the item slot
};

std::vector<ControlledDef> controlled_defs() {
  std::vector<ControlledDef> defs;

  defs.push_back({"c_gender", "he", "she",
      {"John", "James", "Robert", "Michael", "William", "David", "Richard",
       "Joseph", "Thomas", "Charles", "Daniel", "Matthew", "Anthony", "Mark",
       "Steven", "Paul", "Andrew", "Joshua", "Kenneth", "Kevin", "Brian",
       "George", "Edward", "Henry"},
      {"Mary", "Patricia", "Jennifer", "Linda", "Elizabeth", "Barbara", "Susan",
       "Jessica", "Sarah", "Karen", "Nancy", "Lisa", "Betty", "Margaret",
       "Sandra", "Ashley", "Dorothy", "Emily", "Michelle", "Carol", "Amanda",
       "Melissa", "Deborah", "Laura"},
      {"{} said that", "As soon as {} woke up,", "Before leaving, {} checked whether",
       "{} smiled because"}});

  defs.push_back({"c_plant", "plant", "animal",
      {"oak", "rose", "fern", "tulip", "cactus", "bamboo", "daisy", "maple",
       "pine", "ivy", "lily", "orchid", "sunflower", "willow", "birch", "clover",
       "moss", "lavender", "mint", "basil", "cedar", "aspen"},
      {"dog", "cat", "horse", "lion", "tiger", "bear", "wolf", "fox", "deer",
       "rabbit", "eagle", "sparrow", "owl", "crow", "duck", "goose", "whale",
       "dolphin", "sheep", "goat", "monkey", "camel"},
      {"Biologically, a {} is classified as a", "In a field guide, the {} appears under",
       "A {} is a kind of", "Scientists categorize the {} as a"}});

  defs.push_back({"c_animal", "mammal", "bird",
      {"dog", "cat", "horse", "cow", "lion", "tiger", "bear", "wolf", "fox",
       "deer", "rabbit", "mouse", "elephant", "monkey", "whale", "dolphin",
       "sheep", "goat", "pig", "camel", "leopard", "otter", "bat", "seal",
       "squirrel"},
      {"eagle", "sparrow", "owl", "crow", "robin", "pigeon", "hawk", "duck",
       "goose", "swan", "parrot", "penguin", "falcon", "heron", "stork",
       "pelican", "flamingo", "seagull", "woodpecker", "hummingbird", "raven",
       "magpie", "finch", "peacock", "turkey"},
      {"Zoologists classify the {} as a", "A {} is a kind of",
       "In the animal kingdom, the {} is a", "Taxonomically, the {} is a"}});

  defs.push_back({"c_continent", "Europe", "Asia",
      {"France", "Germany", "Spain", "Italy", "Portugal", "Greece", "Austria",
       "Poland", "Norway", "Sweden", "Finland", "Denmark", "Ireland", "Hungary",
       "Romania", "Bulgaria", "Croatia", "Serbia", "Ukraine", "Belgium",
       "Switzerland", "Czechia", "Albania"},
      {"Japan", "China", "India", "Thailand", "Vietnam", "Indonesia", "Malaysia",
       "Mongolia", "Nepal", "Pakistan", "Iran", "Iraq", "Israel", "Cambodia",
       "Laos", "Bangladesh", "Myanmar", "Jordan", "Lebanon", "Syria", "Yemen",
       "Oman", "Bhutan"},
      {"{} is located in", "{} is a country in", "Geographically, {} belongs to",
       "On a world map, {} is part of"}});

  defs.push_back({"c_material", "metal", "wood",
      {"nail", "wire", "coin", "key", "blade", "anchor", "chain", "horseshoe",
       "girder", "screw", "bolt", "spring", "kettle", "pipe", "sword", "shield",
       "wrench", "hinge", "railing", "can", "rivet", "anvil"},
      {"log", "plank", "twig", "branch", "stump", "barrel", "crate", "oar",
       "mast", "chopstick", "toothpick", "ladder", "bench", "stool", "broom",
       "cradle", "easel", "paddle", "dowel", "trellis", "wardrobe", "sawhorse"},
      {"A typical {} is made of", "The usual material of a {} is",
       "A {} is most often made of", "Craftsmen make a {} out of"}});

  {
    ControlledDef parity{"c_parity", "even", "odd", {}, {}, {
        "The number {} is", "In terms of parity, {} is",
        "Mathematically, {} counts as", "Divided by two, {} comes out"}};
    for (int i = 1; i <= 37; ++i) {
      parity.items_a.push_back(std::to_string(2 * i));
      parity.items_b.push_back(std::to_string(2 * i - 1));
    }
    defs.push_back(std::move(parity));
  }

  defs.push_back({"c_phase", "solid", "liquid",
      {"ice", "granite", "iron", "brick", "marble", "diamond", "chalk", "coal",
       "copper", "glass", "quartz", "concrete", "steel", "bone", "wax", "salt",
       "sandstone", "clay", "rubber", "plastic", "amber", "slate"},
      {"water", "milk", "juice", "oil", "vinegar", "gasoline", "honey", "syrup",
       "wine", "beer", "coffee", "tea", "broth", "mercury", "ink", "blood",
       "rainwater", "lemonade", "cider", "brine", "petrol", "sap"},
      {"At room temperature, {} is a", "In its usual state, {} is a",
       "Physically, {} is normally a", "{} is typically found as a"}});

  defs.push_back({"c_taste", "sweet", "sour",
      {"honey", "sugar", "candy", "chocolate", "caramel", "jam", "cake",
       "frosting", "marshmallow", "toffee", "fudge", "nectar", "molasses",
       "syrup", "raisin", "date", "mango", "banana", "pudding", "donut",
       "marzipan", "meringue"},
      {"lemon", "lime", "vinegar", "grapefruit", "tamarind", "kefir",
       "sauerkraut", "pickle", "gooseberry", "cranberry", "rhubarb", "kimchi",
       "buttermilk", "sourdough", "crabapple", "kumquat", "currant", "yuzu",
       "verjuice", "umeboshi", "pomelo", "citron"},
      {"The taste of {} is distinctly", "On the tongue, {} is", "{} tastes",
       "Most people describe {} as"}});

  defs.push_back({"c_plural", "singular", "plural",
      {"cat", "house", "tree", "book", "river", "chair", "apple", "cloud",
       "stone", "bird", "door", "lamp", "bridge", "flower", "ticket", "candle",
       "island", "bottle", "garden", "letter", "window", "basket"},
      {"cats", "houses", "trees", "books", "rivers", "chairs", "apples",
       "clouds", "stones", "birds", "doors", "lamps", "bridges", "flowers",
       "tickets", "candles", "islands", "bottles", "gardens", "letters",
       "windows", "baskets"},
      {"The word {} is grammatically", "Grammatically, the noun {} is",
       "In number, the word {} is", "The form of the word {} is"}});

  defs.push_back({"c_daynight", "day", "night",
      {"sunrise", "noon", "lunch", "daylight", "sunshine", "morning",
       "breakfast", "afternoon", "picnic", "recess", "siesta", "midday",
       "daybreak", "brunch", "sunbathing", "daytime", "forenoon", "matinee",
       "dawn", "sunup", "lunchtime", "schoolday"},
      {"midnight", "moonlight", "starlight", "dusk", "dream", "nightmare",
       "curfew", "lullaby", "nightfall", "evening", "twilight", "bedtime",
       "insomnia", "moonrise", "nightwatch", "owl", "lantern", "firefly",
       "nocturne", "sleepover", "stargazing", "midnights"},
      {"The word {} is associated with", "{} belongs to the", "People connect {} with the",
       "{} happens during the"}});

  defs.push_back({"c_sentiment", "positive", "negative",
      {"joy", "love", "hope", "success", "delight", "triumph", "kindness",
       "praise", "comfort", "victory", "laughter", "friendship", "gratitude",
       "pleasure", "harmony", "cheer", "bliss", "optimism", "warmth",
       "generosity", "courage", "honesty"},
      {"grief", "hate", "despair", "failure", "misery", "defeat", "cruelty",
       "insult", "sorrow", "loss", "anguish", "betrayal", "resentment", "pain",
       "discord", "gloom", "dread", "pessimism", "coldness", "greed",
       "cowardice", "dishonesty"},
      {"The connotation of the word {} is", "Emotionally, {} is a word that feels",
       "The word {} carries a feeling that is", "In sentiment, {} is"}});

  defs.push_back({"c_temperature", "hot", "cold",
      {"desert", "fire", "lava", "summer", "oven", "furnace", "steam", "sauna",
       "sunburn", "ember", "chili", "geyser", "bonfire", "kettle", "griddle",
       "equator", "heatwave", "volcano", "flame", "coals", "toaster", "jacuzzi"},
      {"ice", "snow", "winter", "glacier", "freezer", "frost", "blizzard",
       "icicle", "tundra", "hail", "igloo", "sleet", "permafrost", "iceberg",
       "slush", "arctic", "chill", "snowman", "frostbite", "coolant", "icebox",
       "polar"},
      {"To the touch, {} is", "The word {} suggests something",
       "In temperature, {} is", "{} feels"}});

  defs.push_back({"c_size", "big", "small",
      {"whale", "mountain", "elephant", "skyscraper", "ocean", "planet",
       "glacier", "stadium", "cathedral", "airliner", "container", "sequoia",
       "hippo", "tanker", "boulder", "mansion", "giant", "continent", "galaxy",
       "fortress", "iceberg", "colossus"},
      {"ant", "pebble", "crumb", "seed", "button", "thimble", "pea", "grain",
       "needle", "splinter", "freckle", "raindrop", "ladybug", "marble", "bead",
       "flea", "gnat", "speck", "pinhead", "droplet", "minnow", "sprout"},
      {"In size, a {} is", "Compared to most things, a {} is",
       "A {} is physically", "People describe a {} as"}});

  defs.push_back({"c_speed", "fast", "slow",
      {"cheetah", "rocket", "jet", "falcon", "bullet", "lightning", "race car",
       "sprinter", "arrow", "meteor", "express", "hare", "stallion", "torpedo",
       "hurricane", "swift", "gazelle", "motorbike", "bobsled", "greyhound",
       "airplane", "comet"},
      {"snail", "sloth", "tortoise", "slug", "glacier", "caterpillar", "barge",
       "oxcart", "tugboat", "steamroller", "escargot", "manatee", "koala",
       "turtle", "donkey cart", "freighter", "mosey", "dawdler", "plodder",
       "crawler", "drifter", "loiterer"},
      {"In motion, a {} is", "Compared to most things, a {} is",
       "A {} moves", "People describe a {} as"}});

  defs.push_back({"c_hardness", "hard", "soft",
      {"diamond", "granite", "steel", "concrete", "marble", "quartz", "anvil",
       "brick", "titanium", "flint", "obsidian", "bedrock", "ceramic", "bone",
       "enamel", "ironwood", "slate", "basalt", "tungsten", "armor", "helmet",
       "shell"},
      {"pillow", "sponge", "feather", "velvet", "cotton", "silk", "marshmallow",
       "dough", "pudding", "wool", "fleece", "foam", "moss", "butter", "jelly",
       "cushion", "plush", "down", "cashmere", "suede", "blanket", "putty"},
      {"To the touch, {} is", "In texture, {} is", "{} feels",
       "Materially, {} is"}});

  defs.push_back({"c_indoor", "indoor", "outdoor",
      {"sofa", "oven", "bathtub", "wardrobe", "fireplace", "bookshelf",
       "staircase", "carpet", "ceiling", "pantry", "cupboard", "hallway",
       "kitchen", "bedroom", "cellar", "attic", "dresser", "mirror",
       "chandelier", "radiator", "armchair", "bunkbed"},
      {"tree", "mountain", "fountain", "meadow", "sidewalk", "garden", "forest",
       "beach", "trail", "campfire", "playground", "orchard", "pasture",
       "streetlamp", "driveway", "patio", "hedge", "lawn", "riverbank", "cliff",
       "vineyard", "prairie"},
      {"A {} is usually found", "You would expect a {} to be",
       "A {} normally belongs", "Most of the time, a {} is"}});

  defs.push_back({"c_moisture", "wet", "dry",
      {"ocean", "rain", "swamp", "puddle", "waterfall", "dew", "marsh", "mist",
       "monsoon", "lagoon", "sponge", "downpour", "drizzle", "flood", "spray",
       "splash", "bog", "creek", "tide", "foam", "slush", "steam"},
      {"desert", "dust", "sand", "drought", "bone", "cracker", "parchment",
       "straw", "ash", "chalk", "tinder", "raisin", "saltine", "tumbleweed",
       "sawdust", "hay", "sunbaked clay", "cork", "kindling", "powder", "lint",
       "toast"},
      {"To the touch, {} is", "The word {} suggests something",
       "In moisture, {} is", "{} feels"}});

  defs.push_back({"c_volume", "loud", "quiet",
      {"thunder", "siren", "drum", "explosion", "jackhammer", "trumpet",
       "firework", "jet engine", "chainsaw", "megaphone", "alarm", "cannon",
       "stadium", "concert", "roar", "horn", "cymbal", "shout", "bellow",
       "clatter", "racket", "blast"},
      {"whisper", "library", "snowfall", "meadow", "sigh", "feather", "hush",
       "murmur", "lullaby", "breeze", "chapel", "midnight", "tiptoe", "padding",
       "mouse", "silence", "stillness", "calm", "drift", "shadow", "mist",
       "moth"},
      {"In sound, {} is", "The word {} suggests something", "{} sounds",
       "Acoustically, {} is"}});

  defs.push_back({"c_habitat", "land", "water",
      {"camel", "horse", "lion", "elephant", "wolf", "rabbit", "deer", "goat",
       "fox", "badger", "hedgehog", "kangaroo", "zebra", "giraffe", "bison",
       "antelope", "mole", "squirrel", "chipmunk", "porcupine", "armadillo",
       "meerkat"},
      {"shark", "whale", "salmon", "dolphin", "octopus", "jellyfish", "eel",
       "trout", "tuna", "squid", "stingray", "seahorse", "clam", "lobster",
       "crab", "oyster", "cod", "herring", "manatee", "walrus", "marlin",
       "anchovy"},
      {"The natural habitat of the {} is", "A {} lives mostly on",
       "You would look for a {} on", "The {} makes its home on"}});

  defs.push_back({"c_shape", "round", "flat",
      {"ball", "orange", "globe", "marble", "bubble", "pearl", "melon", "wheel",
       "ring", "coin", "dome", "balloon", "planet", "egg", "grape", "onion",
       "tomato", "pumpkin", "bead", "sphere", "cherry", "plum"},
      {"pancake", "paper", "board", "table", "ruler", "tile", "plate", "screen",
       "card", "sheet", "blade", "mat", "tray", "slab", "panel", "poster",
       "carpet", "mirror", "shelf", "wafer", "lid", "film"},
      {"In shape, a {} is", "Geometrically, a {} is", "A {} is mostly",
       "People describe a {} as"}});

  defs.push_back({"c_weight", "heavy", "light",
      {"anvil", "boulder", "truck", "piano", "safe", "anchor", "barbell",
       "locomotive", "tank", "elephant", "refrigerator", "wardrobe", "tractor",
       "cannon", "statue", "girder", "engine", "bulldozer", "millstone",
       "sarcophagus", "vault", "monolith"},
      {"feather", "balloon", "leaf", "snowflake", "petal", "cork", "foam",
       "bubble", "tissue", "dandelion", "moth", "confetti", "straw", "lint",
       "gauze", "ash", "pollen", "thread", "vapor", "chiffon", "origami",
       "parachute silk"},
      {"In weight, a {} is", "To lift, a {} is", "A {} is physically",
       "Compared to most things, a {} is"}});

  defs.push_back({"c_age", "ancient", "modern",
      {"pyramid", "colosseum", "scroll", "hieroglyph", "chariot", "amphora",
       "catapult", "parchment", "obelisk", "aqueduct", "toga", "papyrus",
       "ziggurat", "rune", "longbow", "galley", "mosaic", "fresco", "relic",
       "sundial", "abacus", "sphinx"},
      {"smartphone", "laptop", "drone", "satellite", "microchip", "website",
       "robot", "podcast", "email", "spreadsheet", "hashtag", "selfie",
       "bluetooth", "streaming", "touchscreen", "server", "algorithm", "app",
       "browser", "emoji", "router", "pixel"},
      {"The word {} belongs to the", "A {} is characteristically",
       "Historically, the {} is", "In era, the {} is"}});

  defs.push_back({"c_danger", "dangerous", "safe",
      {"cobra", "shark", "volcano", "avalanche", "grenade", "tornado",
       "scorpion", "landmine", "tsunami", "wildfire", "viper", "chainsaw",
       "quicksand", "lightning", "piranha", "asbestos", "cliff edge", "rapids",
       "minefield", "crocodile", "blizzard", "explosion"},
      {"kitten", "pillow", "teddy bear", "blanket", "meadow", "cradle",
       "playground", "marshmallow", "bubble bath", "slippers", "garden",
       "library", "picnic", "lullaby", "sandbox", "daisy", "puppy", "armchair",
       "nursery", "teacup", "sweater", "bookshop"},
      {"Most people consider a {} to be", "In terms of risk, a {} is",
       "A {} is generally", "Experts rate the {} as"}});

  defs.push_back({"c_edible", "edible", "inedible",
      {"bread", "apple", "cheese", "rice", "carrot", "banana", "potato", "egg",
       "tomato", "pasta", "chicken", "fish", "lettuce", "yogurt", "walnut",
       "mushroom", "honey", "butter", "oatmeal", "grape", "pumpkin", "spinach",
       "salmon"},
      {"rock", "glass", "plastic", "gravel", "cardboard", "soap", "chalk",
       "concrete", "styrofoam", "rubber", "sand", "marble", "wire", "paint",
       "bleach", "cement", "foil", "sponge", "eraser", "candle", "magnet",
       "pebble", "brick"},
      {"For humans, {} is", "Nutritionally, {} is considered", "{} is generally",
       "Doctors classify {} as"}});

  defs.push_back({"c_natural", "natural", "artificial",
      {"river", "mountain", "tree", "coral", "thunder", "meadow", "glacier",
       "canyon", "pearl", "amber", "waterfall", "forest", "dune", "reef",
       "geyser", "moss", "cloud", "cave", "spring", "boulder", "tide",
       "aurora"},
      {"plastic", "robot", "concrete", "nylon", "cellophane", "asphalt",
       "neon sign", "spreadsheet", "billboard", "vinyl", "polyester",
       "styrofoam", "circuit", "synthesizer", "hologram", "turbine", "antenna",
       "scaffold", "linoleum", "laminate", "acrylic", "formica"},
      {"In origin, a {} is", "A {} is something", "By origin, the {} is",
       "The {} came about in a way that is"}});

  return defs;
}

ConceptFamily gen_controlled(const ControlledDef& def) {
  ConceptFamily fam;
  fam.family_id = def.family_id;
  fam.kind = FamilyKind::controlled_binary;
  fam.classes = {def.class_a, def.class_b};
  fam.templates = def.templates;
  for (const auto& t : def.templates) {
    for (const auto& item : def.items_a) add(fam, subst(t, item), def.class_a, def.class_a);
    for (const auto& item : def.items_b) add(fam, subst(t, item), def.class_b, def.class_b);
  }
  return fam;
}

}  // namespace

std::vector<ConceptFamily> generate_core_families() {
  std::vector<ConceptFamily> fams;
  fams.push_back(gen_arithmetic());
  fams.push_back(gen_geography());
  fams.push_back(gen_sequence());
  fams.push_back(gen_word_transform());
  fams.push_back(gen_analogy());
  for (auto& f : fams) f.check_invariants();
  return fams;
}

std::vector<ConceptFamily> generate_controlled_families() {
  std::vector<ConceptFamily> fams;
  for (const auto& def : controlled_defs()) fams.push_back(gen_controlled(def));
  for (auto& f : fams) f.check_invariants();
  return fams;
}

}  // namespace lap
