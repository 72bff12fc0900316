#pragma once

// Seeded synthetic datasets shared by the unit, integration and acceptance suites.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ighsom/matrix.hpp"
#include "ighsom/records.hpp"

namespace ighsom::testing {

struct LabeledMatrix {
  Matrix data;
  std::vector<std::string> labels;
};

inline double gaussian(std::mt19937_64& rng) {
  // Box-Muller on raw 53-bit uniforms keeps the stream identical across standard libraries.
  auto uniform = [&] { return (static_cast<double>(rng() >> 11) + 0.5) * (1.0 / 9007199254740992.0); };
  const double u1 = uniform(), u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// `per_cluster` isotropic Gaussian samples around each center.
inline LabeledMatrix blobs(const std::vector<std::vector<double>>& centers, std::size_t per_cluster, double sigma,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  LabeledMatrix out;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < per_cluster; ++i) {
      std::vector<double> row(centers[c].size());
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = centers[c][j] + sigma * gaussian(rng);
      out.data.append_row(row);
      out.labels.push_back("c" + std::to_string(c));
    }
  }
  return out;
}

/// Four well-separated 2-D Gaussians at the corners of a square.
inline LabeledMatrix four_gaussians(std::size_t per_cluster, std::uint64_t seed, double sigma = 0.6) {
  return blobs({{0, 0}, {6, 0}, {0, 6}, {6, 6}}, per_cluster, sigma, seed);
}

/// Tourist records clustered around a few sightseeing areas, with comments drawn from
/// area-specific vocabularies so that tf-idf features carry signal.
inline std::vector<TouristRecord> tourist_records(std::size_t n, std::uint64_t seed) {
  struct Area {
    double lat, lon, alt;
    const char* name;
    std::vector<std::string> words;
  };
  const std::vector<Area> areas = {
      {34.296, 132.320, 20.0, "Miyajima", {"shrine", "deer", "torii", "oyster", "island", "ferry"}},
      {34.395, 132.455, 40.0, "Hiroshima", {"ramen", "okonomiyaki", "castle", "tram", "cafe", "museum"}},
      {34.410, 133.197, 170.0, "Onomichi", {"seto", "sea", "temple", "slope", "cat", "bridge"}},
      {34.480, 132.265, 260.0, "Lake", {"fishing", "lake", "yamame", "quiet", "forest", "camp"}},
  };
  const std::vector<std::string> common = {"the", "is", "very", "a", "and", "we", "nice", "good"};
  std::mt19937_64 rng(seed);
  std::vector<TouristRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = areas[i % areas.size()];
    TouristRecord r;
    r.id = static_cast<std::int64_t>(i + 1);
    r.lat = a.lat + 0.01 * gaussian(rng);
    r.lon = a.lon + 0.01 * gaussian(rng);
    r.alt = a.alt + 5.0 * gaussian(rng);
    r.name = std::string(a.name) + " spot " + std::to_string(i % 7);
    r.evaluation = static_cast<int>(rng() % 5);
    std::string comment;
    const std::size_t words = 3 + rng() % 6;
    for (std::size_t w = 0; w < words; ++w) {
      const bool local = rng() % 3 != 0;
      const auto& pool = local ? a.words : common;
      if (!comment.empty()) comment += ' ';
      comment += pool[rng() % pool.size()];
    }
    r.comment = comment + ".";
    out.push_back(std::move(r));
  }
  return out;
}

/// Plain-text reference documents, one per area plus a generic travel page.
inline std::vector<std::pair<std::string, std::string>> tourist_corpus() {
  return {
      {"hiroshima", "hiroshima castle museum tram okonomiyaki ramen the city is a good place"},
      {"hatsukaichi", "miyajima island shrine torii deer ferry oyster the island is very nice"},
      {"onomichi", "onomichi temple slope cat seto sea bridge the view is good"},
      {"akitakata", "lake forest camp fishing quiet the mountain is nice"},
      {"blog", "we went to the cafe and the ramen was very good we like hiroshima"},
  };
}

/// Ten survey rows from the Hiroshima sample, with their comments.
inline std::string sample_table_csv() {
  return "no,lat,lon,alt,name,evaluation,comment\n"
         "6,34.363369,132.470307,32.30,Oyster Street,2,A posh cafe is over there!\n"
         "9,34.484011,132.269203,258.8,Fishing Lake,3,\"A peaceful fishing lake. After enjoying fishing, we must eat "
         "them.\"\n"
         "10,34.484362,132.269326,272.6,Fishing Lake,4,I caught some fishes. 'Yamame' is delicate.\n"
         "11,34.473791,132.240430,356.2,Rodge,1,There is nothing.\n"
         "13,34.367706,132.175777,357.5,Futae Yaki(Cake),4,'Futae-Yaki' is a kind of fried cake.\n"
         "16,34.388838,132.103882,575.7,Spa Rakan,4,This spa stands by roadside station.\n"
         "58,34.393745,132.436148,41.4,Game spot,3,Famous game center.\n"
         "200,34.387643,132.430239,50.7,Tomato noodle,4,Tomato Ramen is a salt ramen with tomato.\n"
         "227,34.410682,133.197108,174.8,Onomichi,4,The seto sea is very beautiful.\n"
         "241,34.393464,132.459653,52.3,High quality Japanese Restaurant,4,\"Very delicious, but too expensive...\"\n";
}

/// Iris measurements (150 x 4) and species labels from tests/data/iris.csv.
inline LabeledMatrix load_iris(const std::string& path) {
  std::ifstream in(path);
  LabeledMatrix out;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    std::string cell;
    for (int k = 0; k < 4; ++k) {
      std::getline(ss, cell, ',');
      row.push_back(std::stod(cell));
    }
    std::getline(ss, cell);
    out.data.append_row(row);
    out.labels.push_back(cell);
  }
  return out;
}

}  // namespace ighsom::testing
