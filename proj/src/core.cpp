// Copyright 2026 The tallyrank Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tallyrank/core.hpp"

namespace tallyrank {

std::string_view ToString(Sport sport) {
  switch (sport) {
    case Sport::kBasketball:
      return "basketball";
    case Sport::kRugby:
      return "rugby";
  }
  return "unknown";
}

std::string_view ToString(Conference conference) {
  switch (conference) {
    case Conference::kEast:
      return "East";
    case Conference::kWest:
      return "West";
    case Conference::kNone:
      return "None";
  }
  return "None";
}

Sport ParseSport(std::string_view text) {
  if (text == "basketball" || text == "nba") return Sport::kBasketball;
  if (text == "rugby" || text == "super_rugby") return Sport::kRugby;
  throw ValidationError("unknown sport '" + std::string(text) +
                        "' (expected basketball or rugby)");
}

Conference ParseConference(std::string_view text) {
  if (text == "East" || text == "east" || text == "E") return Conference::kEast;
  if (text == "West" || text == "west" || text == "W") return Conference::kWest;
  if (text == "None" || text == "none" || text.empty()) return Conference::kNone;
  throw ValidationError("unknown conference '" + std::string(text) + "'");
}

}  // namespace tallyrank
