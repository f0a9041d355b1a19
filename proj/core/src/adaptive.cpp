/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include <streamsubiso/adaptive.hpp>

#include <algorithm>

namespace streamsubiso {

std::int64_t recommend_cluster_gap(const Engine& engine, QueryId query, double quantile) {
    return engine.synopsis().recommend_cluster_gap(engine.query(query).name, quantile);
}

GapRecommendation apply_recommendation(Engine& engine, QueryId query, double quantile, AdaptMode mode) {
    GapRecommendation rec;
    rec.old_gap = engine.query(query).constraints.cluster_gap;
    // A zero gap is not a valid constraint; same-timestamp hits round up to one unit.
    rec.new_gap = std::max<std::int64_t>(1, recommend_cluster_gap(engine, query, quantile));
    if (mode == AdaptMode::Auto) {
        engine.set_cluster_gap(query, ClusterGap{rec.new_gap, GapUnit::Time});
        rec.applied = true;
    }
    return rec;
}

}// namespace streamsubiso
