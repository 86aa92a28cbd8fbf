#include <polarscale/csv.hpp>
#include <polarscale/svg.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace polarscale;

TEST(Csv, Quoting)
{
    EXPECT_EQ(csv_field("plain"), "plain");
    EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
    std::ostringstream os;
    csv_row(os, {"1", "x,y", ""});
    EXPECT_EQ(os.str(), "1,\"x,y\",\n");
}

TEST(Svg, WellFormedPlot)
{
    std::ostringstream os;
    write_svg_plot(os, {"t <&>", "x", "y", true, true}, {{"s", {0.1, 1.0, 10.0}, {1.0, 0.1, 0.01}}});
    std::string s = os.str();
    EXPECT_EQ(s.rfind("<svg", 0), 0u);
    EXPECT_NE(s.find("</svg>"), std::string::npos);
    EXPECT_NE(s.find("t &lt;&amp;&gt;"), std::string::npos);
    EXPECT_NE(s.find("<polyline"), std::string::npos);
    EXPECT_THROW(write_svg_plot(os, {}, {{"bad", {1.0}, {}}}), std::invalid_argument);
}

TEST(Svg, SkipsNonPositiveOnLogAxes)
{
    std::ostringstream os;
    write_svg_plot(os, {"", "", "", false, true}, {{"", {0, 1, 2}, {0.0, 1.0, 2.0}}});
    EXPECT_EQ(os.str().find("nan"), std::string::npos);
}
