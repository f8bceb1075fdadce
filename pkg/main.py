import sys
import os

# Add src to path for development mode
src_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'src')
if src_path not in sys.path:
    sys.path.insert(0, src_path)

try:
    from eos_symmetry_tool.__main__ import main
except Exception as e:
    import traceback
    print("\n" + "!" * 60, file=sys.stderr)
    print(" CRITICAL ERROR: eos-tool failed to start.", file=sys.stderr)
    print(f" Error Type: {type(e).__name__}", file=sys.stderr)
    print(f" Error Message: {e}", file=sys.stderr)
    print("!" * 60 + "\n", file=sys.stderr)
    traceback.print_exc()
    print("\nPython Search Paths:", file=sys.stderr)
    for p in sys.path:
        print(f"  - {p}", file=sys.stderr)
    sys.exit(1)

if __name__ == "__main__":
    sys.exit(main())
