from semigroup_depth.cli import main

raise SystemExit(main())
