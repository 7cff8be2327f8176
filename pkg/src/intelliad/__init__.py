"""Ad integration identification, ad cost profiling and review mining for Android apps."""

from .catalog import (AdFormat, AdIntegrationScheme, AdNetworkCatalog, AppPackageInput,
                      InputKind, default_catalog, detect_networks, extract_ad_formats,
                      load_catalog)
from .power import PowerModel, cpu_power, fit_linear, load_power_model, wifi_power
from .reviews import CostType, KeywordTable, ReviewRecord, classify_review, filter_ad_reviews
from .trace import (CostVector, aggregate_runs, compute_cost_vector, estimate_power,
                    separate_costs)

__version__ = "0.1.0"
