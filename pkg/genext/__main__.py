from genext.cli.runner import main

raise SystemExit(main())
