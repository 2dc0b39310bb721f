#pragma once

// Synthetic records in the NSL-KDD text layout (41 features, label, optional
// difficulty). Normal traffic comes from two internally consistent profiles
// (web and mail/dns); attacks look like SYN floods or port probes. Columns
// are correlated within a profile, so a column shuffle of normal rows yields
// combinations that no real profile produces.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>

namespace fixtures {

struct Options {
  std::size_t rows = 200;
  double normal_fraction = 0.5;
  bool with_difficulty = true;
  std::uint64_t seed = 1;
};

inline std::string nslkdd_text(const Options& opt) {
  std::mt19937_64 gen(opt.seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto pick = [&](double lo, double hi) { return lo + (hi - lo) * u(gen); };
  const auto ipick = [&](int lo, int hi) {
    return lo + static_cast<int>(u(gen) * static_cast<double>(hi - lo + 1)) % (hi - lo + 1);
  };
  std::ostringstream out;
  out.precision(4);
  for (std::size_t r = 0; r < opt.rows; ++r) {
    const bool normal = u(gen) < opt.normal_fraction;
    const int profile = ipick(0, 1);
    std::string protocol, service, flag, label;
    double src = 0, dst = 0, count = 0, srv_count = 0, serror = 0, rerror = 0, same_srv = 0,
           diff_srv = 0, dst_host_count = 0, dst_host_srv = 0, logged_in = 0;
    if (normal) {
      label = "normal";
      if (profile == 0) {
        protocol = "tcp";
        service = "http";
        flag = "SF";
        src = pick(180, 320);
        dst = pick(1000, 9000);
        count = ipick(1, 12);
        srv_count = count + ipick(0, 4);
        same_srv = 1.0;
        logged_in = 1;
        dst_host_count = ipick(100, 255);
        dst_host_srv = ipick(200, 255);
      } else {
        protocol = ipick(0, 1) == 0 ? "udp" : "tcp";
        service = protocol == "udp" ? "domain_u" : "smtp";
        flag = "SF";
        src = pick(30, 60);
        dst = pick(40, 200);
        count = ipick(60, 160);
        srv_count = count;
        same_srv = pick(0.9, 1.0);
        logged_in = protocol == "tcp" ? 1 : 0;
        dst_host_count = 255;
        dst_host_srv = ipick(150, 255);
      }
    } else if (profile == 0) {
      label = "neptune";
      protocol = "tcp";
      service = ipick(0, 1) == 0 ? "private" : "http";
      flag = "S0";
      count = ipick(100, 500);
      srv_count = ipick(1, 25);
      serror = 1.0;
      same_srv = pick(0.0, 0.1);
      diff_srv = pick(0.05, 0.1);
      dst_host_count = 255;
      dst_host_srv = ipick(1, 25);
    } else {
      label = "portsweep";
      protocol = "tcp";
      service = ipick(0, 1) == 0 ? "private" : "smtp";
      flag = "REJ";
      src = pick(0, 10);
      count = ipick(1, 5);
      srv_count = ipick(1, 5);
      rerror = 1.0;
      same_srv = pick(0.0, 0.3);
      diff_srv = pick(0.5, 1.0);
      dst_host_count = ipick(1, 60);
      dst_host_srv = ipick(1, 10);
    }
    out << 0 << ',' << protocol << ',' << service << ',' << flag << ',' << src << ',' << dst
        << ",0,0,0,0,0," << logged_in << ",0,0,0,0,0,0,0,0,0,0," << count << ',' << srv_count
        << ',' << serror << ',' << serror << ',' << rerror << ',' << rerror << ',' << same_srv
        << ',' << diff_srv << ",0," << dst_host_count << ',' << dst_host_srv << ',' << same_srv
        << ',' << diff_srv << ",0,0," << serror << ',' << serror << ',' << rerror << ','
        << rerror << ',' << label;
    if (opt.with_difficulty) out << ',' << ipick(5, 21);
    out << '\n';
  }
  return out.str();
}

}  // namespace fixtures
