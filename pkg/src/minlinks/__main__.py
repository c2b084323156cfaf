from minlinks.cli import main

raise SystemExit(main())
