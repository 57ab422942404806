#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "waring/scan.hpp"

using namespace waring;

namespace {

// independent oracle: direct nested enumeration of the whole form
std::set<std::uint64_t> brute_representable(const std::vector<unsigned long>& tail,
                                            std::uint64_t X) {
  std::set<std::uint64_t> out;
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> tails;
  std::vector<std::uint64_t> ys;
  detail::enumerate_tails(tail, 0, 0, X, ys, tails);
  for (std::uint64_t x1 = 1; x1 * x1 <= X; ++x1)
    for (std::uint64_t x2 = 1; x1 * x1 + x2 * x2 <= X; ++x2)
      for (std::uint64_t x3 = 1; x1 * x1 + x2 * x2 + x3 * x3 * x3 <= X; ++x3)
        for (std::uint64_t x4 = 1;
             x1 * x1 + x2 * x2 + x3 * x3 * x3 + x4 * x4 * x4 <= X; ++x4) {
          const std::uint64_t head =
              x1 * x1 + x2 * x2 + x3 * x3 * x3 + x4 * x4 * x4;
          for (const auto& [tsum, yy] : tails)
            if (head + tsum <= X) out.insert(head + tsum);
        }
  return out;
}

}  // namespace

TEST_CASE("scan matches brute force for the (6,6) tail") {
  const std::vector<unsigned long> tail{6, 6};
  const std::uint64_t X = 2000;
  ScanReport rep = scan_form(tail, X);
  auto oracle = brute_representable(tail, X);
  CHECK(rep.representable_count == oracle.size());
  CHECK(rep.witnesses_verified == oracle.size());
  for (std::uint64_t n : rep.unrepresented) CHECK(oracle.count(n) == 0);
  CHECK(rep.unrepresented.size() + oracle.size() == X);
}

TEST_CASE("scan matches brute force for a (5,) tail") {
  const std::vector<unsigned long> tail{5};
  const std::uint64_t X = 1500;
  ScanReport rep = scan_form(tail, X);
  auto oracle = brute_representable(tail, X);
  CHECK(rep.representable_count == oracle.size());
  for (std::uint64_t n = 1; n <= X; ++n) {
    const bool in_exceptions =
        std::find(rep.unrepresented.begin(), rep.unrepresented.end(), n) !=
        rep.unrepresented.end();
    CHECK(in_exceptions == (oracle.count(n) == 0));
  }
}

TEST_CASE("small-n exceptions are listed explicitly at X = 100") {
  ScanReport rep = scan_form({6, 6}, 100);
  // the minimum of the form is 1+1+1+1+1+1 = 6, so 1..5 are always exceptions
  for (std::uint64_t n : {1, 2, 3, 4, 5}) {
    CHECK(std::find(rep.unrepresented.begin(), rep.unrepresented.end(), n) !=
          rep.unrepresented.end());
  }
  CHECK(rep.representable_count + rep.unrepresented.size() == 100);
}

TEST_CASE("scan witness stream") {
  const std::string path = "scan_witnesses.csv";
  ScanReport rep = scan_form({6, 6}, 400, path);
  std::ifstream in(path);
  REQUIRE(in.good());
  std::string header;
  std::getline(in, header);
  CHECK(header == "n,x1,x2,x3,x4,y1,y2");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == rep.representable_count);
  std::remove(path.c_str());
}

TEST_CASE("scan input guards") {
  CHECK_THROWS_AS(scan_form({6, 6}, 0), Error);
  CHECK_THROWS_AS(scan_form({6, 6}, 100000001), Error);
  CHECK_THROWS_AS(scan_form({1}, 100), Error);
}
