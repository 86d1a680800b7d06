#include "lognls/field.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "lognls/spectral.hpp"

namespace lognls {

WaveField::WaveField(Grid g, std::vector<cdouble> values) : grid_(std::move(g)), v_(std::move(values)) {
  if (v_.size() != grid_.size()) throw ConstraintError("field: value count does not match grid");
}

WaveField sample_function(const Grid& g, const std::function<cdouble(const double*)>& fn) {
  WaveField f(g);
  std::vector<double> x(g.dim());
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.coords(i, x.data());
    const cdouble z = fn(x.data());
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ConstraintError("sample_function: non-finite value at a grid point");
    f[i] = z;
  }
  return f;
}

double l2_norm(const WaveField& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
  const double r = std::sqrt(s * f.grid().cell_volume());
  if (!std::isfinite(r)) throw ConstraintError("l2_norm: non-finite field");
  return r;
}

double l2_distance(const WaveField& f, const WaveField& g) {
  if (f.grid() != g.grid()) throw ConstraintError("l2_distance: fields live on different grids");
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += std::norm(f[i] - g[i]);
  const double r = std::sqrt(s * f.grid().cell_volume());
  if (!std::isfinite(r)) throw ConstraintError("l2_distance: non-finite field");
  return r;
}

double boundary_mass_fraction(const WaveField& f) {
  const Grid& g = f.grid();
  const std::size_t d = g.dim();
  std::vector<std::size_t> margin(d), idx(d);
  for (std::size_t j = 0; j < d; ++j) {
    std::size_t m = g.npts(j) / 20;  // outer 5% per side
    margin[j] = m < 2 ? 2 : m;
  }
  double total = 0.0, outer = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    g.unrank(i, idx.data());
    const double w = std::norm(f[i]);
    total += w;
    for (std::size_t j = 0; j < d; ++j) {
      if (idx[j] < margin[j] || idx[j] >= g.npts(j) - margin[j]) {
        outer += w;
        break;
      }
    }
  }
  return total > 0.0 ? outer / total : 0.0;
}

double spectral_tail_fraction(const WaveField& f) {
  const Grid& g = f.grid();
  SpectralTransform ft(g);
  std::vector<cdouble> spec(f.size());
  ft.forward(f.values().data(), spec.data());

  const std::size_t d = g.dim();
  std::vector<std::vector<double>> k(d);
  std::vector<double> kcut(d);
  for (std::size_t j = 0; j < d; ++j) {
    k[j] = wavenumbers(g, j);
    kcut[j] = (2.0 / 3.0) * M_PI / g.dx(j);
  }
  std::vector<std::size_t> idx(d);
  double total = 0.0, tail = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    g.unrank(i, idx.data());
    const double w = std::norm(spec[i]);
    total += w;
    for (std::size_t j = 0; j < d; ++j) {
      if (std::abs(k[j][idx[j]]) > kcut[j]) {
        tail += w;
        break;
      }
    }
  }
  return total > 0.0 ? tail / total : 0.0;
}

void save_field_csv(const WaveField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("save_field_csv: cannot open " + path);
  std::fputs("index,re,im\n", fp);
  for (std::size_t i = 0; i < f.size(); ++i)
    std::fprintf(fp, "%zu,%.17g,%.17g\n", i, f[i].real(), f[i].imag());
  if (std::fclose(fp) != 0) throw Error("save_field_csv: write failure on " + path);
}

namespace {
constexpr char kMagic[8] = {'L', 'N', 'W', 'F', '0', '0', '0', '1'};
}

void save_field_binary(const WaveField& f, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("save_field_binary: cannot open " + path);
  out.write(kMagic, 8);
  const std::uint64_t d = f.grid().dim();
  out.write(reinterpret_cast<const char*>(&d), 8);
  for (std::size_t j = 0; j < d; ++j) {
    const double lo = f.grid().lo(j), hi = f.grid().hi(j);
    const std::uint64_t n = f.grid().npts(j);
    out.write(reinterpret_cast<const char*>(&lo), 8);
    out.write(reinterpret_cast<const char*>(&hi), 8);
    out.write(reinterpret_cast<const char*>(&n), 8);
  }
  out.write(reinterpret_cast<const char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(cdouble)));
  if (!out) throw Error("save_field_binary: write failure on " + path);
}

WaveField load_field_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("load_field_binary: cannot open " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw Error("load_field_binary: bad magic in " + path);
  std::uint64_t d = 0;
  in.read(reinterpret_cast<char*>(&d), 8);
  std::vector<AxisSpec> axes(d);
  for (std::uint64_t j = 0; j < d; ++j) {
    std::uint64_t n = 0;
    in.read(reinterpret_cast<char*>(&axes[j].lo), 8);
    in.read(reinterpret_cast<char*>(&axes[j].hi), 8);
    in.read(reinterpret_cast<char*>(&n), 8);
    axes[j].n = n;
  }
  Grid g = Grid::make(std::move(axes));
  std::vector<cdouble> vals(g.size());
  in.read(reinterpret_cast<char*>(vals.data()), static_cast<std::streamsize>(vals.size() * sizeof(cdouble)));
  if (!in) throw Error("load_field_binary: truncated file " + path);
  return WaveField(std::move(g), std::move(vals));
}

}  // namespace lognls
