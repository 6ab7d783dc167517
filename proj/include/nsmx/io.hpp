// SPDX-License-Identifier: Apache-2.0

#ifndef NSMX_IO_HPP
#define NSMX_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "nsmx/diagnostics.hpp"

namespace nsmx {

// --- CSV time series ---------------------------------------------------------

inline const char* csv_header() {
  return "t,e_classical,dissipation,e1,d1,e2,d2,linf_u,linf_B,"
         "smallness_margin,div_u_l2,div_B_l2,third_u_l2,third_B_l2,"
         "ampere_residual,mean_E";
}

// 17 significant digits, '.' decimal, locale-independent.
inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string csv_row(const EnergyReport& r) {
  std::string s;
  const double cols[] = {r.t,       r.e_classical, r.dissipation,
                         r.e1,      r.d1,          r.e2,
                         r.d2,      r.linf_u,      r.linf_B,
                         r.smallness_margin,       r.div_u_l2,
                         r.div_B_l2, r.third_u_l2, r.third_B_l2,
                         r.ampere_residual,        r.mean_E};
  for (size_t i = 0; i < std::size(cols); ++i) {
    if (i) s += ',';
    s += format_g17(cols[i]);
  }
  return s;
}

inline void write_series_csv(const std::string& path,
                             const std::vector<EnergyReport>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

// --- snapshots ---------------------------------------------------------------
// Layout: uint64 little-endian header length, then the JSON header, then the
// payload: per field n^2 doubles, little-endian, physical-space values,
// row-major with x2 fastest.

namespace detail {

inline uint64_t fnv1a64(const unsigned char* data, size_t len) {
  uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

static_assert(sizeof(double) == 8);

}  // namespace detail

struct Snapshot {
  nlohmann::json header;
  std::vector<std::vector<double>> payload;  // one n^2 block per field
};

inline void write_snapshot(const std::string& path, const std::string& system,
                           double t, double eps, int n,
                           const std::vector<std::pair<std::string, const ScalarField2D*>>& fields) {
  std::vector<unsigned char> payload;
  payload.reserve(fields.size() * static_cast<size_t>(n) * n * 8);
  for (const auto& [name, f] : fields) {
    (void)name;
    const auto vals = f->to_physical();
    const auto* p = reinterpret_cast<const unsigned char*>(vals.data());
    payload.insert(payload.end(), p, p + vals.size() * 8);
  }

  nlohmann::json header;
  header["format_version"] = 1;
  header["system"] = system;
  header["n"] = n;
  header["t"] = t;
  header["eps"] = eps;
  header["byte_order"] = "little";
  std::vector<std::string> names;
  for (const auto& [name, f] : fields) {
    (void)f;
    names.push_back(name);
  }
  header["fields"] = names;
  header["checksum"] = detail::hex64(detail::fnv1a64(payload.data(), payload.size()));

  const std::string hs = header.dump();
  const uint64_t hlen = hs.size();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  unsigned char lenbuf[8];
  for (int i = 0; i < 8; ++i) lenbuf[i] = static_cast<unsigned char>((hlen >> (8 * i)) & 0xff);
  out.write(reinterpret_cast<const char*>(lenbuf), 8);
  out.write(hs.data(), static_cast<std::streamsize>(hs.size()));
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size()));
}

inline Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  unsigned char lenbuf[8];
  in.read(reinterpret_cast<char*>(lenbuf), 8);
  if (!in) throw std::runtime_error("truncated snapshot: " + path);
  uint64_t hlen = 0;
  for (int i = 0; i < 8; ++i) hlen |= static_cast<uint64_t>(lenbuf[i]) << (8 * i);
  std::string hs(hlen, '\0');
  in.read(hs.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw std::runtime_error("truncated snapshot header: " + path);

  Snapshot snap;
  snap.header = nlohmann::json::parse(hs);
  const int n = snap.header.at("n").get<int>();
  const auto names = snap.header.at("fields").get<std::vector<std::string>>();
  const size_t block = static_cast<size_t>(n) * n * 8;
  std::vector<unsigned char> payload(names.size() * block);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(payload.size()));
  if (static_cast<size_t>(in.gcount()) != payload.size()) {
    throw std::runtime_error("snapshot payload length mismatch: " + path);
  }
  const std::string sum =
      detail::hex64(detail::fnv1a64(payload.data(), payload.size()));
  if (sum != snap.header.at("checksum").get<std::string>()) {
    throw std::runtime_error("snapshot checksum mismatch: " + path);
  }
  for (size_t fi = 0; fi < names.size(); ++fi) {
    std::vector<double> vals(static_cast<size_t>(n) * n);
    std::memcpy(vals.data(), payload.data() + fi * block, block);
    snap.payload.push_back(std::move(vals));
  }
  return snap;
}

inline void write_nsm_snapshot(const std::string& path, const NsmState& s) {
  write_snapshot(path, "nsm", s.t, s.eps, s.u.grid().n(),
                 {{"u1", &s.u.c1}, {"u2", &s.u.c2}, {"u3", &s.u.c3},
                  {"B1", &s.B.c1}, {"B2", &s.B.c2}, {"B3", &s.B.c3},
                  {"E1", &s.E.c1}, {"E2", &s.E.c2}, {"E3", &s.E.c3}});
}

inline void write_mhd_snapshot(const std::string& path, const MhdState& s) {
  write_snapshot(path, "mhd", s.t, 0.0, s.u.grid().n(),
                 {{"u1", &s.u.c1}, {"u2", &s.u.c2}, {"u3", &s.u.c3},
                  {"B1", &s.B.c1}, {"B2", &s.B.c2}, {"B3", &s.B.c3}});
}

}  // namespace nsmx

#endif
