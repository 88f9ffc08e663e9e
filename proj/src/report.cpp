// SPDX-License-Identifier: Apache-2.0
//! \file report.cpp
#include "uvnlos/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace uvnlos
{
namespace
{
std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string escape(std::string const& s)
{
    std::string out;
    for (char c : s)
    {
        switch (c)
        {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Series
{
    char const* name;
    char const* color;
    std::optional<double> ReportRow::*field;
};

}  // namespace

std::vector<std::string> csv_columns()
{
    return {"range_m",  "x_o_m",   "pl_total_db",      "pl_sca_db",
            "pl_ref_db", "q_sca_j", "q_ref_j",          "blocked_fraction",
            "mcpt_pl_db", "mcpt_stderr_db", "delta_db"};
}

std::string format_value(double value)
{
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (std::isnan(value))
        return "nan";
    char buf[64];
    for (int prec = 6; prec <= 17; ++prec)
    {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value)
            break;
    }
    return buf;
}

std::string format_csv(std::vector<ReportRow> const& rows)
{
    std::ostringstream out;
    auto const cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';
    auto cell = [&out](std::optional<double> const& v) {
        out << ',';
        if (v)
            out << format_value(*v);
    };
    for (ReportRow const& r : rows)
    {
        out << format_value(r.range_m);
        cell(r.x_o_m);
        cell(r.pl_total_db);
        cell(r.pl_sca_db);
        cell(r.pl_ref_db);
        cell(r.q_sca_j);
        cell(r.q_ref_j);
        cell(r.blocked_fraction);
        cell(r.mcpt_pl_db);
        cell(r.mcpt_stderr_db);
        cell(r.delta_db);
        out << '\n';
    }
    return out.str();
}

std::string format_svg(std::vector<ReportRow> const& rows,
                       std::string const& title,
                       std::optional<double> offset_thickness)
{
    static Series const series[] = {
        {"total", "#1f77b4", &ReportRow::pl_total_db},
        {"scattered", "#2ca02c", &ReportRow::pl_sca_db},
        {"reflected", "#d62728", &ReportRow::pl_ref_db},
        {"MCPT", "#9467bd", &ReportRow::mcpt_pl_db},
    };
    auto abscissa = [&](ReportRow const& r) -> std::optional<double> {
        if (!offset_thickness)
            return r.range_m;
        if (!r.x_o_m)
            return std::nullopt;
        return std::abs(*r.x_o_m + 0.5 * *offset_thickness);
    };

    double xmin = std::numeric_limits<double>::infinity();
    double xmax = -xmin;
    double ymin = xmin;
    double ymax = -xmin;
    for (ReportRow const& r : rows)
    {
        auto const x = abscissa(r);
        if (!x)
            continue;
        for (Series const& s : series)
        {
            auto const& y = r.*(s.field);
            if (y && std::isfinite(*y))
            {
                xmin = std::min(xmin, *x);
                xmax = std::max(xmax, *x);
                ymin = std::min(ymin, *y);
                ymax = std::max(ymax, *y);
            }
        }
    }
    if (!(xmin <= xmax))
    {
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax - xmin < 1e-9)
        xmax = xmin + 1;
    if (ymax - ymin < 1e-9)
    {
        ymin -= 0.5;
        ymax += 0.5;
    }

    double const w = 720, h = 450, left = 70, right = 150, top = 40, bottom = 55;
    double const pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
        << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n"
        << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (int k = 0; k <= 5; ++k)
    {
        double const x = xmin + (xmax - xmin) * k / 5;
        double const y = ymin + (ymax - ymin) * k / 5;
        out << "<text x=\"" << fixed(px(x), 1) << "\" y=\"" << top + ph + 18
            << "\" text-anchor=\"middle\">" << fixed(x, 1) << "</text>\n"
            << "<text x=\"" << left - 6 << "\" y=\"" << fixed(py(y) + 4, 1)
            << "\" text-anchor=\"end\">" << fixed(y, 1) << "</text>\n";
    }
    out << "<text x=\"" << left + pw / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\">"
        << (offset_thickness ? "|x_o + s/2| (m)" : "range (m)") << "</text>\n"
        << "<text transform=\"translate(18," << top + ph / 2
        << ") rotate(-90)\" text-anchor=\"middle\">path loss (dB)</text>\n";

    int legend = 0;
    for (Series const& s : series)
    {
        std::string points;
        for (ReportRow const& r : rows)
        {
            auto const x = abscissa(r);
            auto const& y = r.*(s.field);
            if (!x || !y || !std::isfinite(*y))
                continue;
            points += fixed(px(*x), 2) + "," + fixed(py(*y), 2) + " ";
        }
        if (points.empty())
            continue;
        points.pop_back();
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"2\" points=\"" << points << "\"/>\n";
        double const ly = top + 15 + 20 * legend++;
        out << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\""
            << left + pw + 40 << "\" y2=\"" << ly << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << left + pw + 46 << "\" y=\"" << ly + 4 << "\">" << s.name
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace uvnlos
