#include "geogan/tilegrid/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace geogan::tilegrid {

const char* season_name(Season s) {
  switch (s) {
    case Season::Mar: return "MAR";
    case Season::Jun: return "JUN";
    case Season::Sep: return "SEP";
    case Season::Dec: return "DEC";
  }
  return "?";
}

std::optional<Season> parse_season(const std::string& s) {
  std::string u;
  for (char c : s) u.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (u == "MAR") return Season::Mar;
  if (u == "JUN") return Season::Jun;
  if (u == "SEP") return Season::Sep;
  if (u == "DEC") return Season::Dec;
  return std::nullopt;
}

unsigned season_month(Season s) {
  switch (s) {
    case Season::Mar: return 3;
    case Season::Jun: return 6;
    case Season::Sep: return 9;
    case Season::Dec: return 12;
  }
  return 0;
}

double quantize(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

void Manifest::add(PairedSample s) {
  s.lat = quantize(s.lat, 6);
  s.lon = quantize(s.lon, 6);
  s.cloud_fraction = quantize(s.cloud_fraction, 4);
  entries.push_back(std::move(s));
}

void write_manifest(const Manifest& m, const std::string& path) {
  std::set<std::pair<std::string, Season>> seen;
  for (const PairedSample& e : m.entries) {
    if (!seen.emplace(e.tile_id, e.season).second) {
      throw DuplicateIdError("Manifest: duplicate entry for tile '" + e.tile_id + "' season " +
                             season_name(e.season));
    }
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << "GEOGAN-MANIFEST v1 zoom=" << m.zoom << " tile_px=" << m.tile_px;
  if (!m.created.empty()) os << " created=" << m.created;
  os << "\n";
  char buf[64];
  for (const PairedSample& e : m.entries) {
    os << e.tile_id << '\t' << season_name(e.season) << '\t';
    std::snprintf(buf, sizeof(buf), "%.6f\t%.6f\t%.4f", e.lat, e.lon, e.cloud_fraction);
    os << buf << '\t' << e.sat_path << '\t' << e.map_path << "\n";
  }
  if (!os) throw IoError("write failed for '" + path + "'");
}

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& s, long line_no, const char* what) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw ParseError(std::string("bad ") + what + " value '" + s + "'", line_no);
  }
  return v;
}

}  // namespace

Manifest read_manifest(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path + "' for reading");

  std::string header;
  if (!std::getline(is, header)) throw ParseError("empty manifest", 1);
  std::istringstream hs(header);
  std::string magic, version;
  hs >> magic >> version;
  if (magic != "GEOGAN-MANIFEST") throw ParseError("not a manifest file (bad magic)", 1);
  if (version != "v1") throw VersionError("unsupported manifest version '" + version + "'");

  Manifest m;
  bool saw_zoom = false, saw_px = false;
  std::string kv;
  while (hs >> kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ParseError("bad header field '" + kv + "'", 1);
    const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
    if (key == "zoom") {
      m.zoom = static_cast<int>(parse_double(val, 1, "zoom"));
      saw_zoom = true;
    } else if (key == "tile_px") {
      m.tile_px = static_cast<long>(parse_double(val, 1, "tile_px"));
      saw_px = true;
    } else if (key == "created") {
      m.created = val;
    } else {
      throw ParseError("unknown header field '" + key + "'", 1);
    }
  }
  if (!saw_zoom || !saw_px) throw ParseError("manifest header missing zoom/tile_px", 1);

  std::string line;
  long line_no = 1;
  std::set<std::pair<std::string, Season>> seen;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 7) {
      throw ParseError("expected 7 tab-separated fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    PairedSample e;
    e.tile_id = fields[0];
    const auto season = parse_season(fields[1]);
    if (!season) throw ParseError("unknown season '" + fields[1] + "'", line_no);
    e.season = *season;
    e.lat = parse_double(fields[2], line_no, "lat");
    e.lon = parse_double(fields[3], line_no, "lon");
    e.cloud_fraction = parse_double(fields[4], line_no, "cloud_fraction");
    e.sat_path = fields[5];
    e.map_path = fields[6];
    if (!seen.emplace(e.tile_id, e.season).second) {
      throw DuplicateIdError("manifest line " + std::to_string(line_no) + ": duplicate tile '" +
                             e.tile_id + "' season " + fields[1]);
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace geogan::tilegrid
