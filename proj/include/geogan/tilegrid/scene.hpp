#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "geogan/core/error.hpp"

namespace geogan::tilegrid {

/// Calendar date with day arithmetic.
struct Date {
  int year = 1970;
  unsigned month = 1;  // 1..12
  unsigned day = 1;    // 1..31

  static Date from_string(const std::string& iso);  // YYYY-MM-DD
  std::string to_string() const;

  std::chrono::sys_days to_days() const;
  static Date from_days(std::chrono::sys_days d);
  Date plus_days(int n) const;

  auto operator<=>(const Date& o) const { return to_days() <=> o.to_days(); }
  bool operator==(const Date& o) const = default;
};

struct DateWindow {
  Date start, end;  // inclusive

  bool contains(const Date& d) const { return start <= d && d <= end; }
  DateWindow widened(int days) const { return {start.plus_days(-days), end.plus_days(days)}; }
  std::string to_string() const { return start.to_string() + ".." + end.to_string(); }
};

/// Calendar month containing the seasonal sampling target.
DateWindow month_window(int year, unsigned month);

struct SceneCandidate {
  std::string scene_id;
  Date acquisition_date;
  double cloud_fraction = 0.0;  // in [0, 1]
};

struct SceneSelectPolicy {
  double cloud_threshold = 0.10;  // fraction below which a scene is accepted outright
  int extension_days = 15;        // widening per extension, each side
};

/// Picks the least-cloudy candidate inside `window`, ties broken by earliest
/// acquisition date. When no in-window candidate is below the cloud threshold
/// the window widens by extension_days per step, up to max_extensions; if the
/// widest window still has only cloudy candidates the least cloudy one is
/// returned. Throws NoSceneError when no candidate is visible at all.
SceneCandidate select_scene(const std::vector<SceneCandidate>& candidates,
                            const DateWindow& window, int max_extensions,
                            const SceneSelectPolicy& policy = {});

}  // namespace geogan::tilegrid
