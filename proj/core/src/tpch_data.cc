#include "querygen/tpch_data.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "internal/dates.h"
#include "querygen/error.h"
#include "querygen/random.h"

namespace querygen {

namespace {

const std::vector<std::string> kRegions = {"AFRICA", "AMERICA", "ASIA", "EUROPE", "MIDDLE EAST"};

struct Nation {
  const char* name;
  int region;
};
const std::vector<Nation> kNations = {
    {"ALGERIA", 0},   {"ARGENTINA", 1}, {"BRAZIL", 1},         {"CANADA", 1},
    {"EGYPT", 4},     {"ETHIOPIA", 0},  {"FRANCE", 3},         {"GERMANY", 3},
    {"INDIA", 2},     {"INDONESIA", 2}, {"IRAN", 4},           {"IRAQ", 4},
    {"JAPAN", 2},     {"JORDAN", 4},    {"KENYA", 0},          {"MOROCCO", 0},
    {"MOZAMBIQUE", 0}, {"PERU", 1},     {"CHINA", 2},          {"ROMANIA", 3},
    {"SAUDI ARABIA", 4}, {"VIETNAM", 2}, {"RUSSIA", 3},        {"UNITED KINGDOM", 3},
    {"UNITED STATES", 1}};

const std::vector<std::string> kWords = {
    "furiously", "quickly", "carefully", "blithely", "slyly", "final", "pending", "regular",
    "express",   "ironic",  "special",   "bold",     "even",  "deposits", "requests",
    "packages",  "accounts", "theodolites", "instructions", "foxes", "pinto", "beans"};
const std::vector<std::string> kColors = {"almond", "antique", "azure", "beige", "blush",
                                          "chiffon", "coral", "cream", "dodger", "forest",
                                          "ghost", "honeydew", "khaki", "lavender", "linen"};
const std::vector<std::string> kTypeA = {"STANDARD", "SMALL", "MEDIUM", "LARGE", "ECONOMY", "PROMO"};
const std::vector<std::string> kTypeB = {"ANODIZED", "BURNISHED", "PLATED", "POLISHED", "BRUSHED"};
const std::vector<std::string> kTypeC = {"TIN", "NICKEL", "BRASS", "STEEL", "COPPER"};
const std::vector<std::string> kContA = {"SM", "LG", "MED", "JUMBO", "WRAP"};
const std::vector<std::string> kContB = {"CASE", "BOX", "BAG", "JAR", "PKG", "PACK", "CAN", "DRUM"};
const std::vector<std::string> kSegments = {"AUTOMOBILE", "BUILDING", "FURNITURE", "MACHINERY",
                                            "HOUSEHOLD"};
const std::vector<std::string> kPriorities = {"1-URGENT", "2-HIGH", "3-MEDIUM", "4-NOT SPECIFIED",
                                              "5-LOW"};
const std::vector<std::string> kInstructions = {"DELIVER IN PERSON", "COLLECT COD", "NONE",
                                                "TAKE BACK RETURN"};
const std::vector<std::string> kModes = {"REG AIR", "AIR", "RAIL", "SHIP", "TRUCK", "MAIL", "FOB"};

std::string money(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string padded(const char* prefix, std::uint64_t key, int width = 9) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s#%0*llu", prefix, width, static_cast<unsigned long long>(key));
  return buf;
}

std::string comment(Rng& rng) {
  std::string out;
  const auto n = rng.uniform_int(3, 7);
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += rng.pick(kWords);
  }
  return out;
}

std::string phone(Rng& rng, std::uint64_t nation) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%02llu-%03lld-%03lld-%04lld",
                static_cast<unsigned long long>(nation + 10), static_cast<long long>(rng.uniform_int(100, 999)),
                static_cast<long long>(rng.uniform_int(100, 999)),
                static_cast<long long>(rng.uniform_int(1000, 9999)));
  return buf;
}

class TblWriter {
 public:
  TblWriter(const std::filesystem::path& path) : out_(path, std::ios::binary) {
    if (!out_) throw LoadError("cannot write '" + path.string() + "'");
  }
  template <typename... Fields>
  void row(const Fields&... fields) {
    ((out_ << fields << '|'), ...);
    out_ << '\n';
    ++rows_;
  }
  std::uint64_t rows() const { return rows_; }

 private:
  std::ofstream out_;
  std::uint64_t rows_ = 0;
};

// The i-th of four suppliers for a part, as in dbgen. The stride is wrapped
// so that 3 * stride < suppliers and the four suppliers stay distinct at any
// scale; at dbgen's own ratios the wrap never applies.
std::uint64_t part_supplier(std::uint64_t part, std::uint64_t i, std::uint64_t suppliers) {
  const std::uint64_t base = suppliers / 4;
  const std::uint64_t span = (suppliers - 1) / 3 - base + 1;
  const std::uint64_t stride = base + ((part - 1) / suppliers) % span;
  return (part + i * stride) % suppliers + 1;
}

}  // namespace

std::map<std::string, std::uint64_t> write_tpch_tbl(const std::string& directory,
                                                    const TpchSynthOptions& o) {
  if (o.suppliers < 4 || o.parts == 0 || o.customers == 0 || o.orders == 0 ||
      o.max_lines_per_order < 1)
    throw ConfigError("synthetic TPC-H sizes must be positive (at least 4 suppliers)");
  const std::filesystem::path dir(directory);
  std::filesystem::create_directories(dir);
  Rng rng(o.seed);
  std::map<std::string, std::uint64_t> counts;
  const std::uint64_t nations = kNations.size();

  {
    TblWriter w(dir / "region.tbl");
    for (std::size_t r = 0; r < kRegions.size(); ++r) w.row(r, kRegions[r], comment(rng));
    counts["region"] = w.rows();
  }
  {
    TblWriter w(dir / "nation.tbl");
    for (std::size_t n = 0; n < kNations.size(); ++n)
      w.row(n, kNations[n].name, kNations[n].region, comment(rng));
    counts["nation"] = w.rows();
  }

  std::vector<double> retail(o.parts + 1);
  {
    TblWriter w(dir / "part.tbl");
    for (std::uint64_t p = 1; p <= o.parts; ++p) {
      const auto mfgr = rng.uniform_int(1, 5);
      const auto brand = mfgr * 10 + rng.uniform_int(1, 5);
      retail[p] = (90000 + ((p / 10) % 20001) + 100 * (p % 1000)) / 100.0;
      w.row(p, rng.pick(kColors) + " " + rng.pick(kColors) + " " + rng.pick(kColors),
            "Manufacturer#" + std::to_string(mfgr), "Brand#" + std::to_string(brand),
            rng.pick(kTypeA) + " " + rng.pick(kTypeB) + " " + rng.pick(kTypeC),
            rng.uniform_int(1, 50), rng.pick(kContA) + " " + rng.pick(kContB), money(retail[p]),
            comment(rng));
    }
    counts["part"] = w.rows();
  }
  {
    TblWriter w(dir / "supplier.tbl");
    for (std::uint64_t s = 1; s <= o.suppliers; ++s) {
      const auto nation = rng.uniform(nations);
      w.row(s, padded("Supplier", s), comment(rng), nation, phone(rng, nation),
            money(rng.uniform_real(-999.99, 9999.99)), comment(rng));
    }
    counts["supplier"] = w.rows();
  }
  {
    TblWriter w(dir / "partsupp.tbl");
    for (std::uint64_t p = 1; p <= o.parts; ++p)
      for (std::uint64_t i = 0; i < 4; ++i)
        w.row(p, part_supplier(p, i, o.suppliers), rng.uniform_int(1, 9999),
              money(rng.uniform_real(1.0, 1000.0)), comment(rng));
    counts["partsupp"] = w.rows();
  }
  {
    TblWriter w(dir / "customer.tbl");
    for (std::uint64_t c = 1; c <= o.customers; ++c) {
      const auto nation = rng.uniform(nations);
      w.row(c, padded("Customer", c), comment(rng), nation, phone(rng, nation),
            money(rng.uniform_real(-999.99, 9999.99)), rng.pick(kSegments), comment(rng));
    }
    counts["customer"] = w.rows();
  }

  const long start = internal::days_from_civil(1992, 1, 1);
  const long end = internal::days_from_civil(1998, 8, 2);
  const long current = internal::days_from_civil(1995, 6, 17);
  TblWriter orders(dir / "orders.tbl");
  TblWriter lines(dir / "lineitem.tbl");
  for (std::uint64_t k = 1; k <= o.orders; ++k) {
    const std::uint64_t orderkey = (k - 1) / 8 * 32 + (k - 1) % 8 + 1;  // sparse, like dbgen
    const auto cust = static_cast<std::uint64_t>(rng.uniform_int(1, static_cast<std::int64_t>(o.customers)));
    const long odate = rng.uniform_int(start, end - 151);
    const auto nlines = rng.uniform_int(1, o.max_lines_per_order);
    double total = 0;
    int shipped = 0;
    for (int l = 1; l <= nlines; ++l) {
      const auto part = static_cast<std::uint64_t>(rng.uniform_int(1, static_cast<std::int64_t>(o.parts)));
      const auto supp = part_supplier(part, rng.uniform(4), o.suppliers);
      const auto qty = rng.uniform_int(1, 50);
      const double price = static_cast<double>(qty) * retail[part];
      const double disc = static_cast<double>(rng.uniform_int(0, 10)) / 100.0;
      const double tax = static_cast<double>(rng.uniform_int(0, 8)) / 100.0;
      const long ship = odate + rng.uniform_int(1, 121);
      const long commit = odate + rng.uniform_int(30, 90);
      const long receipt = ship + rng.uniform_int(1, 30);
      const bool done = ship <= current;
      shipped += done;
      const char* rflag = receipt <= current ? (rng.bernoulli(0.5) ? "R" : "A") : "N";
      total += price * (1 + tax) * (1 - disc);
      lines.row(orderkey, part, supp, l, qty, money(price), money(disc), money(tax), rflag,
                done ? "F" : "O", internal::civil_from_days(ship), internal::civil_from_days(commit),
                internal::civil_from_days(receipt), rng.pick(kInstructions), rng.pick(kModes),
                comment(rng));
    }
    const char* status = shipped == nlines ? "F" : shipped == 0 ? "O" : "P";
    orders.row(orderkey, cust, status, money(total), internal::civil_from_days(odate),
               rng.pick(kPriorities), padded("Clerk", rng.uniform_int(1, 1000)), 0, comment(rng));
  }
  counts["orders"] = orders.rows();
  counts["lineitem"] = lines.rows();
  return counts;
}

}  // namespace querygen
