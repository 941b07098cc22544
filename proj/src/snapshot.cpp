#include "suctionlab/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "suctionlab/errors.hpp"

namespace suctionlab {

namespace {

static_assert(std::endian::native == std::endian::little, "snapshot I/O assumes a little-endian host");

constexpr char kMagic[8] = {'S', 'L', 'S', 'N', 'A', 'P', '0', '1'};

nlohmann::json header(const StaggeredField& f, const SimulationParams& params) {
  const Grid& g = f.grid();
  nlohmann::json j;
  j["format"] = "suctionlab-snapshot";
  j["version"] = kSnapshotVersion;
  j["time"] = f.time;
  j["params"] = params;
  j["grid"] = {{"n_x", g.n_x}, {"n_y", g.n_y}, {"l_x", g.l_x}, {"h", g.h},
               {"stretch_ratio", g.stretch_ratio}, {"y_faces", g.y_faces}};
  return j;
}

template <class T>
void put(std::ostream& os, const T& value) {
  os.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof(T))) throw FormatError("snapshot: truncated file");
  return value;
}

void put_block(std::ostream& os, const std::vector<double>& data) {
  os.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)));
}

void get_block(std::istream& is, std::vector<double>& data) {
  if (!is.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(double)))) {
    throw FormatError("snapshot: truncated field data");
  }
}

}  // namespace

void write_snapshot(std::ostream& os, const StaggeredField& field, const SimulationParams& params) {
  const std::string text = header(field, params).dump();
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kSnapshotVersion);
  put<std::uint64_t>(os, text.size());
  os.write(text.data(), static_cast<std::streamsize>(text.size()));
  put_block(os, field.u_data());
  put_block(os, field.v_data());
  put_block(os, field.p_data());
  if (!os) throw FormatError("snapshot: write failed");
}

void write_snapshot(const std::string& path, const StaggeredField& field, const SimulationParams& params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path + " for writing");
  write_snapshot(out, field, params);
}

Snapshot read_snapshot(std::istream& is) {
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    throw FormatError("snapshot: bad magic");
  }
  const auto version = get<std::uint32_t>(is);
  if (version != kSnapshotVersion) throw FormatError("snapshot: unsupported version " + std::to_string(version));
  const auto length = get<std::uint64_t>(is);
  if (length > (1u << 26)) throw FormatError("snapshot: header too large");
  std::string text(length, '\0');
  if (!is.read(text.data(), static_cast<std::streamsize>(length))) throw FormatError("snapshot: truncated header");

  Snapshot s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.params = params_from_json(j.at("params"));
    const auto& g = j.at("grid");
    auto grid = std::make_shared<const Grid>(grid_from_faces(g.at("l_x").get<double>(), g.at("n_x").get<int>(),
                                                             g.at("y_faces").get<std::vector<double>>(),
                                                             g.at("stretch_ratio").get<double>()));
    if (grid->n_y != g.at("n_y").get<int>()) throw FormatError("snapshot: n_y does not match y_faces");
    s.field = StaggeredField(grid);
    s.field.time = j.at("time").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("snapshot header: ") + e.what());
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("snapshot grid: ") + e.what());
  }
  get_block(is, s.field.u_data());
  get_block(is, s.field.v_data());
  get_block(is, s.field.p_data());
  return s;
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path);
  return read_snapshot(in);
}

void write_field_csv(std::ostream& os, const StaggeredField& f, const SimulationParams& params) {
  const Grid& g = f.grid();
  os << "# " << header(f, params).dump() << '\n';
  os << "x,y,u,v,p\n";
  char buf[160];
  for (int j = 0; j < g.n_y; ++j) {
    for (int i = 0; i < g.n_x; ++i) {
      const double u = 0.5 * (f.u(i, j) + f.u(i + 1, j));
      const double v = 0.5 * (f.v(i, j) + f.v(i, j + 1));
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.x_center(i), g.y_centers[j], u, v,
                    f.p(i, j));
      os << buf;
    }
  }
}

}  // namespace suctionlab
