import sys


def run_tests(title: str, tests: list) -> None:
    """Runs plain test functions, one line each, and exits 1 if any assertion failed."""
    print(f"{'='*60}")
    print(f"  {title}")
    print(f"{'='*60}")
    failed = 0
    for test in tests:
        try:
            test()
            print(f"  ok    {test.__name__}")
        except AssertionError as e:
            failed += 1
            print(f"  FAIL  {test.__name__}: {e}")
    print(f"\n  {len(tests) - failed}/{len(tests)} passed\n")
    if failed:
        sys.exit(1)
