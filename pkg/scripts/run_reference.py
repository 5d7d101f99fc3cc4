"""Run configs/reference.yaml and print the policy comparison and PAC report."""

import argparse
from pathlib import Path

from deastar.harness import ExperimentConfig, compare_policies, run_experiment

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "configs" / "reference.yaml"))
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    config = ExperimentConfig.load(args.config)
    results = run_experiment(config, workers=args.workers)
    print(compare_policies(results).table())
    print("exceedance P[traveled > (1 + eps) C*] per dea_star setting:")
    for entry in results.pac_report:
        print(
            f"  eps={float(entry['epsilon']):g} delta={float(entry['delta']):g}  "
            f"rate={float(entry['exceedance_rate']):.4f}  "
            f"mean mu={float(entry['mean_mu']):.1f}  mean sum sigma={float(entry['mean_sum_sigma']):.1f}  "
            f"rate<=delta: {entry['rate_at_most_delta']}"
        )


if __name__ == "__main__":
    main()
