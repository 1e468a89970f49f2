#include "geogan/tilegrid/scene.hpp"

#include <cstdio>

namespace geogan::tilegrid {

Date Date::from_string(const std::string& iso) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (std::sscanf(iso.c_str(), "%d-%u-%u", &y, &m, &d) != 3 || m < 1 || m > 12 || d < 1 || d > 31) {
    throw InvalidArgument("Date: expected YYYY-MM-DD, got '" + iso + "'");
  }
  return Date{y, m, d};
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
  return buf;
}

std::chrono::sys_days Date::to_days() const {
  using namespace std::chrono;
  return sys_days{std::chrono::year{year} / std::chrono::month{month} / std::chrono::day{day}};
}

Date Date::from_days(std::chrono::sys_days d) {
  const std::chrono::year_month_day ymd{d};
  return Date{static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
              static_cast<unsigned>(ymd.day())};
}

Date Date::plus_days(int n) const { return from_days(to_days() + std::chrono::days{n}); }

DateWindow month_window(int year, unsigned month) {
  using namespace std::chrono;
  const year_month_day_last ymdl = std::chrono::year{year} / std::chrono::month{month} / last;
  return {Date{year, month, 1}, Date{year, month, static_cast<unsigned>(ymdl.day())}};
}

SceneCandidate select_scene(const std::vector<SceneCandidate>& candidates,
                            const DateWindow& window, int max_extensions,
                            const SceneSelectPolicy& policy) {
  if (window.end < window.start) throw InvalidArgument("select_scene: empty date window");
  if (max_extensions < 0) throw InvalidArgument("select_scene: negative max_extensions");

  const SceneCandidate* best = nullptr;
  for (int ext = 0; ext <= max_extensions; ++ext) {
    const DateWindow w = window.widened(ext * policy.extension_days);
    best = nullptr;
    for (const SceneCandidate& c : candidates) {
      if (!w.contains(c.acquisition_date)) continue;
      if (!best || c.cloud_fraction < best->cloud_fraction ||
          (c.cloud_fraction == best->cloud_fraction &&
           c.acquisition_date < best->acquisition_date)) {
        best = &c;
      }
    }
    if (best && best->cloud_fraction < policy.cloud_threshold) return *best;
  }
  if (best) return *best;  // only cloudy scenes exist; take the least cloudy
  throw NoSceneError("no scene available in window " + window.to_string() + " after " +
                     std::to_string(max_extensions) + " extensions");
}

}  // namespace geogan::tilegrid
