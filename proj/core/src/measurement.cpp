#include "superlens/measurement.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "superlens/errors.hpp"
#include "superlens/format.hpp"

namespace superlens {

double uniform_symmetric_draw(std::uint64_t seed, std::uint64_t counter) {
  // splitmix64 (Steele, Lea, Flood 2014): published constants, stateless per
  // counter, so draws are reproducible and order-independent.
  std::uint64_t z = seed + counter * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = z ^ (z >> 31);
  // 53 uniform bits -> [0, 1), then stretch to [-1, 1]
  const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

MeasurementSet sample_measurements(const TraceInterpolant& trace,
                                   const SceneParameters& p, int m_count) {
  p.validate();
  if (m_count < 2) throw std::invalid_argument("sample_measurements: M must be >= 2");
  MeasurementSet ms;
  ms.scene = p;
  ms.count_m = m_count;
  ms.samples.resize(static_cast<std::size_t>(m_count) + 1);
  for (int m = 0; m <= m_count; ++m) {
    ms.samples[static_cast<std::size_t>(m)] = trace(m * p.period / m_count);
  }
  return ms;
}

MeasurementSet apply_noise(const MeasurementSet& ms, double level,
                           std::uint64_t seed) {
  if (level < 0.0) throw std::invalid_argument("apply_noise: level must be >= 0");
  MeasurementSet out = ms;
  out.noise_level = level;
  out.seed = seed;
  out.noiseless = (level == 0.0);
  for (std::size_t m = 0; m < out.samples.size(); ++m) {
    const double r = level * uniform_symmetric_draw(seed, m);
    out.samples[m] *= (1.0 + r);
  }
  return out;
}

void write_measurement_csv(const MeasurementSet& ms, std::ostream& os) {
  const auto& p = ms.scene;
  os << "# superlens measurement v1\n";
  os << "# period=" << fmt_g17(p.period) << " wavelength=" << fmt_g17(p.wavelength)
     << " slab_bottom=" << fmt_g17(p.slab_bottom)
     << " slab_top=" << fmt_g17(p.slab_top) << " eps_re=" << fmt_g17(p.eps.real())
     << " eps_im=" << fmt_g17(p.eps.imag()) << " mu_re=" << fmt_g17(p.mu.real())
     << " mu_im=" << fmt_g17(p.mu.imag()) << "\n";
  os << "# M=" << ms.count_m << " noise=" << fmt_g17(ms.noise_level)
     << " seed=" << ms.seed << " rng=" << ms.rng_name
     << " noiseless=" << (ms.noiseless ? 1 : 0) << "\n";
  os << "m,x,re_u,im_u\n";
  for (int m = 0; m <= ms.count_m; ++m) {
    const auto& s = ms.samples[static_cast<std::size_t>(m)];
    os << m << "," << fmt_g17(ms.x(m)) << "," << fmt_g17(s.real()) << ","
       << fmt_g17(s.imag()) << "\n";
  }
}

MeasurementSet read_measurement_csv(std::istream& is) {
  MeasurementSet ms;
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string token;
      while (ss >> token) {
        const auto pos = token.find('=');
        if (pos != std::string::npos) kv[token.substr(0, pos)] = token.substr(pos + 1);
      }
      continue;
    }
    if (line.rfind("m,", 0) == 0) continue;
    std::istringstream ss(line);
    std::string m_s, x_s, re_s, im_s;
    if (!std::getline(ss, m_s, ',') || !std::getline(ss, x_s, ',') ||
        !std::getline(ss, re_s, ',') || !std::getline(ss, im_s, ',')) {
      throw ConfigError("measurement csv: malformed row '" + line + "'");
    }
    ms.samples.emplace_back(std::stod(re_s), std::stod(im_s));
  }
  auto need = [&](const char* key) -> std::string {
    auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError(std::string("measurement csv: missing ") + key);
    return it->second;
  };
  ms.scene.period = std::stod(need("period"));
  ms.scene.wavelength = std::stod(need("wavelength"));
  ms.scene.slab_bottom = std::stod(need("slab_bottom"));
  ms.scene.slab_top = std::stod(need("slab_top"));
  ms.scene.eps = cplx(std::stod(need("eps_re")), std::stod(need("eps_im")));
  ms.scene.mu = cplx(std::stod(need("mu_re")), std::stod(need("mu_im")));
  ms.count_m = std::stoi(need("M"));
  ms.noise_level = std::stod(need("noise"));
  ms.seed = std::stoull(need("seed"));
  ms.noiseless = (need("noiseless") == "1");
  if (auto it = kv.find("rng"); it != kv.end()) ms.rng_name = it->second;
  if (static_cast<int>(ms.samples.size()) != ms.count_m + 1) {
    throw ConfigError("measurement csv: row count does not match M + 1");
  }
  return ms;
}

}  // namespace superlens
