#include "conformable/registry.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>

namespace conformable {

std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string shifted(double a) {
  if (a == 0.0) return "t";
  if (a > 0.0) return "(t-" + format_number(a) + ")";
  return "(t+" + format_number(-a) + ")";
}

FuncSpec RegistryEntry::instantiate(double a) const { return FuncSpec::parse(source(a), jump); }

bool RegistryEntry::differentiable_on(double a, double t) const {
  if (!kink_offset) return true;
  const double kink = a + *kink_offset;
  return !(kink > a && kink <= t);
}

const std::vector<RegistryEntry>& builtin_registry() {
  static const std::vector<RegistryEntry> reg = [] {
    std::vector<RegistryEntry> r;
    auto add = [&](std::string name, std::function<std::string(double)> src) -> RegistryEntry& {
      RegistryEntry e;
      e.name = std::move(name);
      e.source = std::move(src);
      r.push_back(std::move(e));
      return r.back();
    };
    add("one", [](double) { return std::string("1"); });
    add("t", [](double) { return std::string("t"); });
    add("t^2", [](double) { return std::string("t^2"); });
    add("power 0.4", [](double a) { return shifted(a) + "^0.4"; }).differentiable_at_terminal = false;
    add("power 0.5 scaled", [](double a) { return shifted(a) + "^0.5/0.5"; }).differentiable_at_terminal = false;
    add("power 1", [](double a) { return shifted(a) + "^1"; });
    add("sin", [](double) { return std::string("sin(t)"); });
    add("cos", [](double) { return std::string("cos(t)"); });
    add("exp", [](double) { return std::string("exp(t)"); });
    add("log", [](double a) {
      return a == 0.0 ? std::string("ln(1+t)") : "ln(1+" + shifted(a) + ")";
    });
    auto& jump = add("t with jump", [](double) { return std::string("t"); });
    jump.jump = 5.0;
    jump.right_continuous = false;
    jump.differentiable_at_terminal = false;
    add("kink", [](double a) {
      const double k = a + 1.0;
      if (k == 0.0) return std::string("abs(t)");
      return "abs(t" + std::string(k > 0 ? "-" : "+") + format_number(std::fabs(k)) + ")";
    }).kink_offset = 1.0;
    return r;
  }();
  return reg;
}

std::string registry_hash(const std::vector<RegistryEntry>& registry, const std::vector<double>& terminals) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ull;
    }
    h ^= 0xff;
    h *= 1099511628211ull;
  };
  for (const auto& e : registry) {
    mix(e.name);
    for (double a : terminals) mix(e.instantiate(a).to_string());
    mix(e.right_continuous ? "rc" : "-");
    mix(e.differentiable_at_terminal ? "da" : "-");
    mix(e.kink_offset ? format_number(*e.kink_offset) : "-");
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace conformable
