#!/usr/bin/env python3
"""
Models of Computation Workbench
Command line entry point: python main.py <subcommand> ...
"""

import sys
import os
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

# Add src directory to Python path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))


def main():
    """Main entry point for the workbench"""
    try:
        from compworkbench.cli import dispatch

        sys.exit(dispatch(sys.argv[1:]))

    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        sys.exit(0)
    except Exception as e:
        print(f"Workbench error: {str(e)}", file=sys.stderr)
        import traceback
        traceback.print_exc()
        sys.exit(1)


if __name__ == "__main__":
    main()
