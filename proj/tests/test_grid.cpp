#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "basket/errors.hpp"
#include "basket/grid.hpp"
#include "support.hpp"

using namespace basket;

TEST_CASE("build_grid examples") {
    CHECK(build_grid({-2, 2, -2, 2}, 4, 4).h() == 1.0);
    CHECK(build_grid({-2, 2, -1, 1}, 8, 4).h() == 0.5);
    CHECK_THROWS_AS((void)build_grid({-2, 2, -2, 2}, 4, 5), ConfigError);
    CHECK_THROWS_AS((void)build_grid({-2, 2, -2, 2}, 3, 3), ConfigError);
    CHECK_THROWS_AS((void)build_grid({2, -2, 2, -2}, 4, 4), ConfigError);
}

TEST_CASE("node coordinates reach the upper bound exactly") {
    test::Gen gen(21);
    for (int i = 0; i < 200; ++i) {
        const double lo1 = gen.uniform(-5, 0), lo2 = gen.uniform(-5, 0);
        const std::size_t n1 = gen.integer(4, 300), n2 = gen.integer(4, 300);
        const double h = gen.uniform(0.001, 0.1);
        const Bounds b{lo1, lo1 + n1 * h, lo2, lo2 + n2 * h};
        const Grid2 g(b, n1, n2);
        CHECK(std::abs(g.x1(n1) - b.x1_max) <= 1e-14);
        CHECK(std::abs(g.x2(n2) - b.x2_max) <= 1e-14);
        CHECK(g.x1(0) == b.x1_min);
    }
}

TEST_CASE("classify examples") {
    const Grid2 g({-2, 2, -2, 2}, 4, 4);
    CHECK(std::holds_alternative<CornerNode>(classify(g, 0, 0)));
    CHECK(std::get<CornerNode>(classify(g, 0, 0)).corner == CornerId::LowerLower);
    CHECK(std::get<CornerNode>(classify(g, 4, 0)).corner == CornerId::UpperLower);
    CHECK(std::holds_alternative<InteriorNode>(classify(g, 1, 1)));
    CHECK(std::get<EdgeNode>(classify(g, 0, 2)).side == Side::X1Lower);
    CHECK(std::get<EdgeNode>(classify(g, 2, 4)).side == Side::X2Upper);
    CHECK_THROWS_AS((void)classify(g, 5, 0), DomainError);
}

TEST_CASE("classify partitions the nodes") {
    test::Gen gen(22);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n1 = gen.integer(4, 40), n2 = gen.integer(4, 40);
        const Grid2 g({0, n1 * 0.1, 0, n2 * 0.1}, n1, n2);
        std::size_t corners = 0, edges = 0, interior = 0;
        for (std::size_t i1 = 0; i1 <= n1; ++i1) {
            for (std::size_t i2 = 0; i2 <= n2; ++i2) {
                const NodeClass c = classify(g, i1, i2);
                corners += std::holds_alternative<CornerNode>(c);
                edges += std::holds_alternative<EdgeNode>(c);
                interior += std::holds_alternative<InteriorNode>(c);
                CHECK(std::holds_alternative<InteriorNode>(c) == !g.is_boundary(i1, i2));
            }
        }
        CHECK(corners == 4);
        CHECK(edges == 2 * (n1 - 1) + 2 * (n2 - 1));
        CHECK(interior == (n1 - 1) * (n2 - 1));
    }
}

TEST_CASE("restriction by injection") {
    const Bounds b{-2, 2, -2, 2};
    const Grid2 g8(b, 8, 8), g16(b, 16, 16), g32(b, 32, 32);
    test::Gen gen(23);
    GridField fine(g32);
    for (double& v : fine.values()) v = gen.uniform(-1, 1);

    const GridField same = restrict_to(fine, g32);
    CHECK(std::equal(same.values().begin(), same.values().end(), fine.values().begin()));

    const GridField half = restrict_to(fine, g16);
    for (std::size_t i1 = 0; i1 <= 16; ++i1)
        for (std::size_t i2 = 0; i2 <= 16; ++i2) CHECK(half.at(i1, i2) == fine.at(2 * i1, 2 * i2));

    const GridField direct = restrict_to(fine, g8);
    const GridField twice = restrict_to(half, g8);
    CHECK(std::equal(direct.values().begin(), direct.values().end(), twice.values().begin()));

    CHECK_THROWS_AS((void)restrict_to(fine, Grid2(b, 12, 12)), ConfigError);
    CHECK_THROWS_AS((void)restrict_to(half, g32), ConfigError);
    CHECK_THROWS_AS((void)restrict_to(fine, Grid2({-2, 2, -1, 3}, 8, 8)), ConfigError);
}

TEST_CASE("GridField invariants") {
    const Grid2 g({0, 1, 0, 1}, 4, 4);
    CHECK(GridField(g).values().size() == 25);
    CHECK_THROWS_AS(GridField(g, std::vector<double>(24)), ConfigError);
    GridField f(g, 2.0);
    CHECK(f.all_finite());
    f.at(1, 2) = -3.0;
    CHECK(f.max_abs() == 3.0);
    f.at(0, 0) = std::nan("");
    CHECK_FALSE(f.all_finite());
}

TEST_CASE("CSV output") {
    const Grid2 g({-2, 2, -2, 2}, 4, 4);
    const GridField f = GridField::sample(g, [](double x1, double x2) { return x1 / 3.0 + x2; });
    std::ostringstream os;
    write_csv(os, f);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x1,x2,value");
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        double x1, x2, v;
        char c1, c2;
        std::istringstream(line) >> x1 >> c1 >> x2 >> c2 >> v;
        CHECK(x1 == g.x1(rows / 5));
        CHECK(x2 == g.x2(rows % 5));
        CHECK(v == f.values()[rows]);
        ++rows;
    }
    CHECK(rows == 25);
}

TEST_CASE("bicubic interpolation reproduces bicubic polynomials") {
    const Grid2 g({-2, 2, -2, 2}, 16, 16);
    auto poly = [](double x, double y) {
        return 1.0 + x - 2 * y + x * y + 0.3 * x * x * x - 0.7 * y * y * y + 0.2 * x * x * y * y * y +
               0.1 * x * x * x * y * y;
    };
    const GridField f = GridField::sample(g, poly);
    test::Gen gen(24);
    for (int i = 0; i < 200; ++i) {
        const double x = gen.uniform(-2, 2), y = gen.uniform(-2, 2);
        CHECK(interpolate_bicubic(f, x, y) == doctest::Approx(poly(x, y)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)interpolate_bicubic(f, 2.5, 0.0), DomainError);
}
