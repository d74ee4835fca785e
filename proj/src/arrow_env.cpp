#include "cookiewalk/arrow_env.hpp"

#include <istream>
#include <sstream>
#include <utility>
#include <variant>

#include "cookiewalk/rng.hpp"

namespace cookiewalk {

namespace {

struct Realized {
  CookieEnvironment env;
  std::uint64_t u_seed;
};

}  // namespace

struct ArrowEnvironment::Source {
  std::variant<ArrowTable, Realized, std::function<int(long, long)>> impl;

  int raw(long x, long n) const {
    if (const auto* t = std::get_if<ArrowTable>(&impl)) {
      return t->at(x, n);
    }
    if (const auto* r = std::get_if<Realized>(&impl)) {
      return arrow_bit(rng::uniform_at(r->u_seed, x, n),
                       r->env.cookie_at(x, n));
    }
    return std::get<std::function<int(long, long)>>(impl)(x, n) ? 1 : 0;
  }
};

ArrowTable ArrowTable::from_code(long x_lo, long x_hi, int depth,
                                 std::uint64_t code) {
  if (x_hi < x_lo) throw UsageError("table window is empty");
  if (depth < 1) throw UsageError("table depth must be positive");
  ArrowTable t;
  t.x_lo = x_lo;
  t.x_hi = x_hi;
  t.depth = depth;
  const long sites = t.sites();
  t.bits.assign(static_cast<std::size_t>(sites),
                std::vector<std::uint8_t>(static_cast<std::size_t>(depth), 0));
  for (long s = 0; s < sites; ++s) {
    for (int d = 0; d < depth; ++d) {
      t.bits[static_cast<std::size_t>(s)][static_cast<std::size_t>(d)] =
          static_cast<std::uint8_t>((code >> (s * depth + d)) & 1u);
    }
  }
  return t;
}

int ArrowTable::at(long x, long n) const {
  if (x < x_lo || x > x_hi) {
    // Out-of-window columns read 1,0,1,0,...
    return (n % 2 == 1) ? 1 : 0;
  }
  if (n <= depth) {
    return bits[static_cast<std::size_t>(x - x_lo)]
               [static_cast<std::size_t>(n - 1)];
  }
  // Alternating tail beyond the explicit depth: 0,1,0,1,...
  const long j = n - depth;
  return (j % 2 == 0) ? 1 : 0;
}

std::string ArrowTable::serialize() const {
  std::ostringstream os;
  for (long x = x_lo; x <= x_hi; ++x) {
    os << x << ":";
    for (int d = 0; d < depth; ++d) {
      os << ' '
         << static_cast<int>(bits[static_cast<std::size_t>(x - x_lo)]
                                 [static_cast<std::size_t>(d)]);
    }
    os << '\n';
  }
  return os.str();
}

ArrowTable ArrowTable::parse(std::istream& in) {
  ArrowTable t;
  t.bits.clear();
  bool first = true;
  long expected = 0;
  std::string line;
  while (std::getline(in, line)) {
    // Allow blank lines and '#' comments between rows.
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) {
      throw UsageError("table line is missing the 'x:' prefix: " + line);
    }
    long x = 0;
    try {
      x = std::stol(line.substr(0, colon));
    } catch (const std::exception&) {
      throw UsageError("table line has a malformed site index: " + line);
    }
    std::istringstream rest(line.substr(colon + 1));
    std::vector<std::uint8_t> row;
    int b = 0;
    while (rest >> b) {
      if (b != 0 && b != 1) {
        throw UsageError("table bits must be 0 or 1: " + line);
      }
      row.push_back(static_cast<std::uint8_t>(b));
    }
    if (!rest.eof()) {
      throw UsageError("table line has trailing garbage: " + line);
    }
    if (row.empty()) {
      throw UsageError("table line carries no bits: " + line);
    }
    if (first) {
      t.x_lo = x;
      t.depth = static_cast<int>(row.size());
      first = false;
    } else {
      if (x != expected) {
        throw UsageError("table sites must be contiguous and ascending");
      }
      if (static_cast<int>(row.size()) != t.depth) {
        throw UsageError("table rows must all have the same depth");
      }
    }
    expected = x + 1;
    t.x_hi = x;
    t.bits.push_back(std::move(row));
  }
  if (first) throw UsageError("table text contains no rows");
  return t;
}

ArrowTable ArrowTable::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ArrowEnvironment::ArrowEnvironment(std::shared_ptr<const Source> src,
                                   long offset, bool reflected)
    : src_(std::move(src)), offset_(offset), reflected_(reflected) {}

ArrowEnvironment ArrowEnvironment::from_table(ArrowTable table) {
  auto src = std::make_shared<Source>();
  src->impl = std::move(table);
  return ArrowEnvironment(std::move(src), 0, false);
}

ArrowEnvironment ArrowEnvironment::from_function(
    std::function<int(long, long)> fn) {
  auto src = std::make_shared<Source>();
  src->impl = std::move(fn);
  return ArrowEnvironment(std::move(src), 0, false);
}

ArrowEnvironment realize(const CookieEnvironment& env,
                         std::uint64_t uniform_seed) {
  auto src = std::make_shared<ArrowEnvironment::Source>();
  src->impl = Realized{env, uniform_seed};
  return ArrowEnvironment(std::move(src), 0, false);
}

int ArrowEnvironment::arrow_at(long x, long n) const {
  if (n < 1) {
    throw UsageError("visit indices are 1-based; got index " +
                     std::to_string(n));
  }
  if (reflected_) {
    return 1 - src_->raw(-(x + offset_), n);
  }
  return src_->raw(x + offset_, n);
}

ArrowEnvironment ArrowEnvironment::shift(long z) const {
  return ArrowEnvironment(src_, offset_ + z, reflected_);
}

ArrowEnvironment ArrowEnvironment::reflect() const {
  return ArrowEnvironment(src_, -offset_, !reflected_);
}

ArrowEnvironment::Nondegeneracy ArrowEnvironment::nondegenerate_within(
    long x, long budget) const {
  if (budget < 2) {
    throw UsageError("non-degeneracy certification needs budget >= 2");
  }
  int prev = arrow_at(x, 1);
  for (long i = 2; i <= budget; ++i) {
    int cur = arrow_at(x, i);
    if (cur != prev) return Nondegeneracy::certified;
    prev = cur;
  }
  return Nondegeneracy::not_certified;
}

const ArrowTable* ArrowEnvironment::table() const {
  if (offset_ != 0 || reflected_) return nullptr;
  return std::get_if<ArrowTable>(&src_->impl);
}

}  // namespace cookiewalk
