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
#ifndef IRS_RESULT_TABLE_HPP
#define IRS_RESULT_TABLE_HPP

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace irs
{
    // Raised when an output file cannot be written; what() names the path
    class IoError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class ColumnKind
    {
        sweep,       // x axis
        parameter,   // per-row setting that is not plotted, e.g. a companion sweep value
        monte_carlo, // sample mean, always followed by its standard error column
        std_error,
        closed_form
    };

    struct Column
    {
        std::string name;
        ColumnKind kind = ColumnKind::closed_form;
        std::vector<double> values;
    };

    struct TableMetadata
    {
        std::string experiment;
        std::uint64_t seed = 0;
        std::uint64_t trials = 0;
        std::string config_hash;
        double wall_time_s = 0.0;
        std::vector<std::string> notes;
    };

    class ResultTable
    {
    public:
        void set_sweep(const std::string &name, std::vector<double> values);
        void add_parameter(const std::string &name, std::vector<double> values);
        // Adds `name` and `name_se`
        void add_monte_carlo(const std::string &name, std::vector<double> mean, std::vector<double> std_error);
        void add_closed_form(const std::string &name, std::vector<double> values);

        std::size_t rows() const;
        const std::vector<Column> &columns() const { return columns_; }
        const Column &column(const std::string &name) const; // throws std::out_of_range
        bool has_column(const std::string &name) const;
        // Names of the plotted series: Monte Carlo means and closed forms
        std::vector<std::string> series_names() const;
        // Empty when every Monte Carlo column is directly followed by its standard error column
        std::vector<std::string> invariant_violations() const;

        TableMetadata metadata;

    private:
        void push(Column c);
        std::vector<Column> columns_;
    };

    std::string format_number(double x); // 17 significant digits

    void write_csv(const ResultTable &table, std::ostream &os);
    void write_svg(const ResultTable &table, std::ostream &os);
    void write_metadata_json(const ResultTable &table, std::ostream &os);

    enum class EmitFormat
    {
        csv,
        svg
    };

    void emit(const ResultTable &table, EmitFormat format, const std::string &path);
    void emit_metadata(const ResultTable &table, const std::string &path);
}

#endif
