// SPDX-License-Identifier: Apache-2.0
//
// irs-sim: hardware-impaired IRS-assisted MISO link simulation library
// Copyright (C) 2025 The irs-sim contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "irs/result_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace irs
{
    void ResultTable::push(Column c)
    {
        if (c.name.empty() || c.name.find_first_of(",\"\n\r") != std::string::npos)
            throw std::invalid_argument("ResultTable: column names must be non-empty and free of commas or quotes");
        if (columns_.empty() && c.kind != ColumnKind::sweep)
            throw std::logic_error("ResultTable: the sweep column must come first");
        if (has_column(c.name))
            throw std::invalid_argument("ResultTable: duplicate column " + c.name);
        if (!columns_.empty() && c.values.size() != rows())
            throw std::invalid_argument("ResultTable: column " + c.name + " has the wrong length");
        columns_.push_back(std::move(c));
    }

    void ResultTable::set_sweep(const std::string &name, std::vector<double> values)
    {
        if (!columns_.empty())
            throw std::logic_error("ResultTable: the sweep column must come first");
        push({name, ColumnKind::sweep, std::move(values)});
    }

    void ResultTable::add_parameter(const std::string &name, std::vector<double> values)
    {
        push({name, ColumnKind::parameter, std::move(values)});
    }

    void ResultTable::add_monte_carlo(const std::string &name, std::vector<double> mean, std::vector<double> std_error)
    {
        if (mean.size() != std_error.size())
            throw std::invalid_argument("ResultTable: mean and standard error lengths differ");
        push({name, ColumnKind::monte_carlo, std::move(mean)});
        push({name + "_se", ColumnKind::std_error, std::move(std_error)});
    }

    void ResultTable::add_closed_form(const std::string &name, std::vector<double> values)
    {
        push({name, ColumnKind::closed_form, std::move(values)});
    }

    std::size_t ResultTable::rows() const
    {
        return columns_.empty() ? 0 : columns_.front().values.size();
    }

    bool ResultTable::has_column(const std::string &name) const
    {
        return std::any_of(columns_.begin(), columns_.end(), [&](const Column &c) { return c.name == name; });
    }

    const Column &ResultTable::column(const std::string &name) const
    {
        for (const auto &c : columns_)
            if (c.name == name)
                return c;
        throw std::out_of_range("ResultTable: no column named " + name);
    }

    std::vector<std::string> ResultTable::series_names() const
    {
        std::vector<std::string> out;
        for (const auto &c : columns_)
            if (c.kind == ColumnKind::monte_carlo || c.kind == ColumnKind::closed_form)
                out.push_back(c.name);
        return out;
    }

    std::vector<std::string> ResultTable::invariant_violations() const
    {
        std::vector<std::string> v;
        for (std::size_t i = 0; i < columns_.size(); ++i)
        {
            if (columns_[i].kind != ColumnKind::monte_carlo)
                continue;
            const bool paired = i + 1 < columns_.size() && columns_[i + 1].kind == ColumnKind::std_error &&
                                columns_[i + 1].name == columns_[i].name + "_se";
            if (!paired)
                v.push_back("column " + columns_[i].name + " lacks a standard error column");
        }
        return v;
    }

    std::string format_number(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (std::isinf(x))
            return x > 0 ? "inf" : "-inf";
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", x);
        return buf;
    }

    void write_csv(const ResultTable &table, std::ostream &os)
    {
        const auto &cols = table.columns();
        for (std::size_t i = 0; i < cols.size(); ++i)
            os << (i ? "," : "") << cols[i].name;
        os << '\n';
        for (std::size_t r = 0; r < table.rows(); ++r)
        {
            for (std::size_t i = 0; i < cols.size(); ++i)
                os << (i ? "," : "") << format_number(cols[i].values[r]);
            os << '\n';
        }
    }

    namespace
    {
        struct Axis
        {
            double lo = 0.0, hi = 1.0;
            bool log = false;

            double map(double v, double px_lo, double px_hi) const
            {
                double a = log ? std::log10(v) : v;
                double l = log ? std::log10(lo) : lo, h = log ? std::log10(hi) : hi;
                if (h == l)
                    return 0.5 * (px_lo + px_hi);
                return px_lo + (a - l) / (h - l) * (px_hi - px_lo);
            }
        };

        Axis make_axis(const std::vector<double> &vals)
        {
            Axis a;
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            bool positive = true;
            for (double v : vals)
                if (std::isfinite(v))
                {
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    positive = positive && v > 0.0;
                }
            if (!(lo <= hi))
                return a;
            a.lo = lo;
            a.hi = hi;
            a.log = positive && hi / lo >= 100.0;
            return a;
        }

        std::string fmt_tick(double v)
        {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.4g", v);
            return buf;
        }
    }

    void write_svg(const ResultTable &table, std::ostream &os)
    {
        static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
        const double W = 900, H = 560, left = 80, right = 260, top = 40, bottom = 60;
        const double x0 = left, x1 = W - right, y0 = H - bottom, y1 = top;

        const auto &cols = table.columns();
        const auto series = table.series_names();
        std::vector<double> xs = cols.empty() ? std::vector<double>{} : cols.front().values;
        std::vector<double> all_y;
        for (const auto &name : series)
        {
            const auto &v = table.column(name).values;
            all_y.insert(all_y.end(), v.begin(), v.end());
        }
        const Axis ax = make_axis(xs), ay = make_axis(all_y);

        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
           << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
        os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
        os << "<text x=\"" << x0 << "\" y=\"24\" font-size=\"15\">" << table.metadata.experiment << "</text>\n";
        os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
           << "\" fill=\"none\" stroke=\"black\"/>\n";
        for (int i = 0; i <= 4; ++i)
        {
            const double fx = i / 4.0;
            const double vx = ax.log ? std::pow(10.0, std::log10(ax.lo) + fx * (std::log10(ax.hi) - std::log10(ax.lo)))
                                     : ax.lo + fx * (ax.hi - ax.lo);
            const double vy = ay.log ? std::pow(10.0, std::log10(ay.lo) + fx * (std::log10(ay.hi) - std::log10(ay.lo)))
                                     : ay.lo + fx * (ay.hi - ay.lo);
            const double px = x0 + fx * (x1 - x0), py = y0 - fx * (y0 - y1);
            os << "<text x=\"" << px << "\" y=\"" << y0 + 18 << "\" text-anchor=\"middle\">" << fmt_tick(vx)
               << "</text>\n";
            os << "<text x=\"" << x0 - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">" << fmt_tick(vy)
               << "</text>\n";
        }
        if (!cols.empty())
            os << "<text x=\"" << 0.5 * (x0 + x1) << "\" y=\"" << H - 16 << "\" text-anchor=\"middle\">"
               << cols.front().name << (ax.log ? " (log)" : "") << "</text>\n";

        for (std::size_t s = 0; s < series.size(); ++s)
        {
            const auto &col = table.column(series[s]);
            const char *color = palette[s % 10];
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\""
               << (col.kind == ColumnKind::closed_form ? " stroke-dasharray=\"6,3\"" : "") << " points=\"";
            bool first = true;
            for (std::size_t r = 0; r < xs.size(); ++r)
            {
                const double x = xs[r], y = col.values[r];
                if (!std::isfinite(x) || !std::isfinite(y) || (ax.log && x <= 0) || (ay.log && y <= 0))
                    continue;
                os << (first ? "" : " ") << ax.map(x, x0, x1) << "," << ay.map(y, y0, y1);
                first = false;
            }
            os << "\"/>\n";
            const double ly = top + 14.0 * static_cast<double>(s) + 8.0;
            os << "<line x1=\"" << x1 + 12 << "\" y1=\"" << ly << "\" x2=\"" << x1 + 36 << "\" y2=\"" << ly
               << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
            os << "<text x=\"" << x1 + 42 << "\" y=\"" << ly + 4 << "\">" << series[s] << "</text>\n";
        }
        os << "</svg>\n";
    }

    void write_metadata_json(const ResultTable &table, std::ostream &os)
    {
        nlohmann::ordered_json j;
        j["experiment"] = table.metadata.experiment;
        j["seed"] = table.metadata.seed;
        j["trials"] = table.metadata.trials;
        j["config_hash"] = table.metadata.config_hash;
        j["wall_time_s"] = table.metadata.wall_time_s;
        j["notes"] = table.metadata.notes;
        os << j.dump(2) << '\n';
    }

    namespace
    {
        template <class Fn>
        void write_file(const std::string &path, Fn &&fn)
        {
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f)
                throw IoError("cannot open " + path + " for writing");
            fn(f);
            f.flush();
            if (!f)
                throw IoError("failed while writing " + path);
        }
    }

    void emit(const ResultTable &table, EmitFormat format, const std::string &path)
    {
        write_file(path, [&](std::ostream &os)
                   {
                       if (format == EmitFormat::csv)
                           write_csv(table, os);
                       else
                           write_svg(table, os); });
    }

    void emit_metadata(const ResultTable &table, const std::string &path)
    {
        write_file(path, [&](std::ostream &os) { write_metadata_json(table, os); });
    }
}
