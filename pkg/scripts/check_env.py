#!/usr/bin/env python3
"""
Check Environment Variables

This script prints the BSGEOM_* environment variables, the configuration they
validate to and its hash.
"""

import os

from dotenv import load_dotenv
from pydantic import ValidationError
from tabulate import tabulate

from bsgeom.config import ExperimentConfig, config_hash
from bsgeom.config.settings import ENV_PREFIX

# Load environment variables
load_dotenv()


def main():
    """Main function."""
    print("🔍 Checking Environment Variables...\n")

    rows = []
    for name, field in ExperimentConfig.model_fields.items():
        variable = f"{ENV_PREFIX}{name.upper()}"
        rows.append([variable, os.getenv(variable, "Not set"), field.default])
    print(tabulate(rows, headers=["variable", "value", "default"], tablefmt="github"))

    try:
        config = ExperimentConfig.from_env()
    except ValidationError as e:
        print("\n❌ Some environment variables do not validate:")
        for error in e.errors():
            print(f"- {ENV_PREFIX}{str(error['loc'][0]).upper()}: {error['msg']}")
        return

    print(f"\n✅ Configuration is valid. configHash={config_hash(config)}")


if __name__ == "__main__":
    main()
