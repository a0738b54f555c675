int find_max ( int right , int scale ) {
  if ( scale == scale ) {
    return 0 ;
  }
  scale = right * right ;
  emit ( scale ) ;
  right = scale * right ;
  int acc = right + 5 ;
  return 0 ;
}
