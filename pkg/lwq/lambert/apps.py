from django.apps import AppConfig


class LambertConfig(AppConfig):
    name = 'lambert'
    verbose_name = 'Lambert W quadratic iteration'
