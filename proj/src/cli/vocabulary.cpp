#include "cskd/cli/cli.hpp"

namespace cskd::cli {

const std::vector<std::string>& mock_concept_vocabulary() {
  static const std::vector<std::string> v = {
      "social gathering place", "outdoor activity", "leisure activity", "healthy lifestyle",
      "physical exercise",      "public place",     "emotional gesture", "daily routine",
      "personal goal",          "household chore",  "creative hobby",    "team sport",
      "electronic device",      "healthcare provider", "family event",   "financial decision",
      "learning experience",    "travel destination", "kind act",        "food item",
      "musical instrument",     "celebration",      "stressful event",   "communication",
      "entertainment",          "competition",      "self improvement",  "relaxing activity",
      "community service",      "romantic gesture", "work task",         "natural setting",
      "transportation",         "weather condition", "social event",     "reading material",
      "home appliance",         "medical issue",    "gift",              "skill",
  };
  return v;
}

const std::vector<std::string>& mock_instance_vocabulary() {
  static const std::vector<std::string> v = {
      "a jazz club",        "a yoga class",        "a beer festival",    "the farmers market",
      "a hiking trail",     "a board game night",  "a cooking class",    "the public library",
      "a soccer match",     "a karaoke bar",       "a birthday party",   "a new smartphone",
      "the city park",      "a charity run",       "a pottery workshop", "a family reunion",
      "a camping trip",     "a museum tour",       "a dance lesson",     "a wine tasting",
      "a bike ride",        "a swimming pool",     "a concert hall",     "a coffee shop",
      "a science fair",     "a chess tournament",  "a beach volleyball game", "a movie night",
      "a guitar lesson",    "a road trip",         "a spa day",          "a picnic",
      "a book signing",     "a job interview",     "a wedding reception", "a marathon",
      "a video call",       "a painting class",    "a fishing trip",     "a dinner party",
      "a math tutor",       "a blood drive",       "a gardening club",   "a tennis court",
      "a rock concert",     "a night market",      "a ski resort",       "a bowling alley",
      "a poetry reading",   "a food truck",        "a volunteer shift",  "a sewing class",
      "an art gallery",     "an escape room",      "an ice rink",        "an open mic night",
      "a cooking contest",  "a street parade",     "a flea market",      "a talent show",
  };
  return v;
}

}  // namespace cskd::cli
