# Test collection wiring: the suite is written for `manage.py test`, so point
# pytest at the same Django project before test modules are imported.
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent / "lwq"))
os.environ.setdefault("DJANGO_SETTINGS_MODULE", "lwq.settings")

import django  # noqa: E402

django.setup()
