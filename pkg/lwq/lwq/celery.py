"""
Celery application for the lwq project.

Row tasks run in-process while CELERY_TASK_ALWAYS_EAGER is on (the default);
set LWQ_CELERY_EAGER=0 to send them to a Redis-backed worker pool.
"""
import os
from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'lwq.settings')

app = Celery('lwq')

# All celery keys in settings carry the CELERY_ prefix.
app.config_from_object('django.conf:settings', namespace='CELERY')

app.autodiscover_tasks()
